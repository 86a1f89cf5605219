import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dlcurves.finite_field import (GF, FieldArray, FieldError, LinearizedSolver, embedding, primitive_modulus,
                                   solve_artin_schreier)

FIELDS = [(2, 1), (2, 3), (2, 5), (3, 1), (3, 2), (3, 3), (3, 6)]


def naive_mul(F, a, b):
    """Schoolbook product of the digit polynomials, reduced by the modulus."""
    p, n, mod = F.p, F.n, list(F.modulus)
    prod = [0] * (2 * n - 1)
    for i, x in enumerate(F.coeffs(a)):
        for j, y in enumerate(F.coeffs(b)):
            prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            for i in range(n + 1):
                prod[k - n + i] = (prod[k - n + i] - c * mod[i]) % p
    return F.from_coeffs(prod[:n])


@pytest.mark.parametrize("p,n", FIELDS)
def test_multiplication_matches_schoolbook(p, n):
    F = GF(p, n)
    rng = np.random.default_rng(0)
    for a, b in rng.integers(0, F.order, size=(300, 2)):
        assert F.mul(int(a), int(b)) == naive_mul(F, int(a), int(b))


@pytest.mark.parametrize("p,n", FIELDS)
def test_addition_is_digitwise(p, n):
    F = GF(p, n)
    rng = np.random.default_rng(1)
    for a, b in rng.integers(0, F.order, size=(300, 2)):
        want = F.from_coeffs([(x + y) % p for x, y in zip(F.coeffs(int(a)), F.coeffs(int(b)))])
        assert F.add(int(a), int(b)) == want


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 728), st.integers(0, 728), st.integers(0, 728))
def test_field_axioms_gf729(a, b, c):
    F = GF(3, 6)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    assert F.sub(F.add(a, b), b) == a
    if a:
        assert F.mul(a, F.inv(a)) == 1
        assert F.div(F.mul(a, b), a) == b


@pytest.mark.parametrize("p,n", FIELDS)
def test_modulus_is_primitive(p, n):
    F = GF(p, n)
    if n == 1:
        return
    g = F.generator()
    seen = set()
    x = 1
    for _ in range(F.order - 1):
        seen.add(x)
        x = F.mul(x, g)
    assert len(seen) == F.order - 1 and x == 1
    assert F.descriptor()["modulus"] == list(primitive_modulus(p, n))


def test_frobenius_fixes_subfield():
    F = GF(3, 6)
    sub = F.subfield_elements(3)
    assert len(sub) == 27
    assert all(F.frobenius(a, 3) == a for a in sub)
    assert sum(F.in_subfield(a, 2) for a in range(F.order)) == 9


def test_prime_field_encoding_shared():
    small, big = GF(3, 3), GF(3, 6)
    emb = embedding(small, big)
    assert emb[1] == 1 and emb[2] == 2
    rng = np.random.default_rng(2)
    for a, b in rng.integers(0, 27, size=(200, 2)):
        a, b = int(a), int(b)
        assert emb[small.mul(a, b)] == big.mul(emb[a], emb[b])
        assert emb[small.add(a, b)] == big.add(emb[a], emb[b])


def test_vectorised_ops_agree():
    F = GF(3, 3)
    a = np.arange(27)
    b = (a * 7 + 3) % 27
    assert F.mul_arr(a, b).tolist() == [F.mul(int(x), int(y)) for x, y in zip(a, b)]
    assert F.add_arr(a, b).tolist() == [F.add(int(x), int(y)) for x, y in zip(a, b)]
    assert F.pow_arr(a, 10).tolist() == [F.pow(int(x), 10) for x in a]
    fa = FieldArray(F, a) * FieldArray(F, b) + 1
    assert fa.values.tolist() == [F.add(F.mul(int(x), int(y)), 1) for x, y in zip(a, b)]


@pytest.mark.parametrize("p,n,q", [(3, 3, 27), (3, 6, 27), (2, 3, 8), (2, 6, 8)])
def test_artin_schreier_solution_sets(p, n, q):
    F = GF(p, n)
    hits = 0
    for c in range(F.order):
        sols = solve_artin_schreier(F, c, q)
        for y in sols:
            assert F.sub(F.pow(y, q), y) == c
        assert len(sols) in (0, q)
        hits += bool(sols)
    # y -> y^q - y is GF(p)-linear with a kernel of size q
    assert hits == F.order // q


def test_linearized_solver_kernel():
    F = GF(3, 2)
    solver = LinearizedSolver(F, lambda y: F.add(F.pow(y, 3), y))
    assert sorted(solver.solve(0)) == sorted(y for y in range(9) if F.add(F.pow(y, 3), y) == 0)


def test_field_errors():
    with pytest.raises(FieldError):
        GF(5, 1)
    with pytest.raises(FieldError):
        GF(3, 13)
    with pytest.raises(FieldError):
        GF(3, 0)
