import pytest

from dlcurves import fixtures
from dlcurves.fixtures import FixtureError


def test_manifest_covers_every_file():
    from importlib import resources
    files = {p.name for p in resources.files("dlcurves.fixtures").iterdir()
             if p.suffix in (".json", ".csv") and p.name != "MANIFEST.json"}
    assert files == set(fixtures.manifest()["files"])
    for name in files:
        fixtures.load_bytes(name)


def test_checksum_mismatch(monkeypatch):
    real = fixtures._read_bytes
    monkeypatch.setattr(fixtures, "_read_bytes",
                        lambda n: real(n) if n == fixtures.MANIFEST else real(n) + b" ")
    with pytest.raises(FixtureError, match="checksum"):
        fixtures.load_json("ree_generators.json")


def test_missing_and_unlisted():
    with pytest.raises(FixtureError):
        fixtures.load_bytes("nope.json")


def test_generator_fixture_shape():
    data = fixtures.load_json("ree_generators.json")
    gens = data["minimal_generators"]
    assert len(gens) == 132 and gens == sorted(gens) and gens[0] == 729


def test_versions():
    v = fixtures.versions()
    assert set(v) == set(fixtures.manifest()["files"])
