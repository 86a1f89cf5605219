"""Reference data shipped with the package, guarded by a sha256 manifest."""

from __future__ import annotations

import hashlib
import json
from importlib import resources

MANIFEST = "MANIFEST.json"


class FixtureError(RuntimeError):
    pass


def _read_bytes(name: str) -> bytes:
    try:
        return resources.files(__name__).joinpath(name).read_bytes()
    except FileNotFoundError:
        raise FixtureError(f"fixture {name} is missing") from None


def sha256(name: str) -> str:
    return hashlib.sha256(_read_bytes(name)).hexdigest()


def manifest() -> dict:
    return json.loads(_read_bytes(MANIFEST))


def load_bytes(name: str) -> bytes:
    """Fixture contents after checking them against the manifest."""
    entry = manifest()["files"].get(name)
    if entry is None:
        raise FixtureError(f"fixture {name} is not listed in the manifest")
    data = _read_bytes(name)
    if hashlib.sha256(data).hexdigest() != entry["sha256"]:
        raise FixtureError(f"checksum mismatch for fixture {name}")
    return data


def load_json(name: str):
    return json.loads(load_bytes(name))


def load_text(name: str) -> str:
    return load_bytes(name).decode()


def versions() -> dict[str, str]:
    """Fixture name -> version string, for reports."""
    return {k: v["version"] for k, v in manifest()["files"].items()}
