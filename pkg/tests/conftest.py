import pytest

from dlcurves.curves import enumerate_points, make_curve
from dlcurves.graph_equations import generate_equations


@pytest.fixture(scope="session")
def ree():
    return make_curve("ree", 1)


@pytest.fixture(scope="session")
def suzuki():
    return make_curve("suzuki", 1)


@pytest.fixture(scope="session")
def hermitian():
    return make_curve("hermitian", 1)


@pytest.fixture(scope="session")
def ree_system(ree):
    return generate_equations(ree)


@pytest.fixture(scope="session")
def suzuki_system(suzuki):
    return generate_equations(suzuki)


@pytest.fixture(scope="session")
def ree_points(ree):
    return enumerate_points(ree, 1)


@pytest.fixture(scope="session")
def ree_semigroup(ree, tmp_path_factory):
    """The full Ree reduction (about two minutes), computed once per session."""
    from dlcurves.semigroup import compute_weierstrass_semigroup
    ck = tmp_path_factory.mktemp("ree") / "ck.npz"
    return compute_weierstrass_semigroup(ree, checkpoint=ck)


_ACCEPTANCE_KEY = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request, capsys):
    """Record and print one PASS/FAIL line for an acceptance criterion."""
    log = request.config.stash.setdefault(_ACCEPTANCE_KEY, {})

    def record(number: int, ok: bool, detail: str) -> bool:
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        log[number] = line
        with capsys.disabled():
            print(f"\n{line}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(_ACCEPTANCE_KEY, {})
    if log:
        terminalreporter.section("acceptance criteria")
        for n in sorted(log):
            terminalreporter.write_line(log[n])
