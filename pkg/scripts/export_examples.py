"""Write every bundled example descriptor to DIR/<name>.json in canonical form."""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from fadzeta import catalog, codec


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("directory", type=Path)
    args = ap.parse_args()
    args.directory.mkdir(parents=True, exist_ok=True)
    for name in sorted(catalog.EXAMPLES):
        data = codec.encode(catalog.load(name))
        path = args.directory / f"{name}.json"
        path.write_text(json.dumps(data, sort_keys=True, indent=2) + "\n", encoding="utf-8")
        print(path)


if __name__ == "__main__":
    main()
