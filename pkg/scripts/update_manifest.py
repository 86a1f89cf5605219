"""Rewrite the fixture checksum manifest after an intentional fixture edit."""

import hashlib
import json
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "dlcurves" / "fixtures"


def main() -> None:
    path = FIXTURES / "MANIFEST.json"
    old = json.loads(path.read_text())["files"] if path.exists() else {}
    files = {}
    for f in sorted(FIXTURES.iterdir()):
        if f.suffix not in (".json", ".csv") or f.name == "MANIFEST.json":
            continue
        digest = hashlib.sha256(f.read_bytes()).hexdigest()
        version = old.get(f.name, {}).get("version", "1")
        if f.name in old and old[f.name]["sha256"] != digest:
            version = str(int(version) + 1)
        files[f.name] = {"sha256": digest, "version": version}
    path.write_text(json.dumps({"files": files}, indent=1) + "\n")


if __name__ == "__main__":
    main()
