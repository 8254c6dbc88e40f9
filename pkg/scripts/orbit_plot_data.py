"""CSV series of N pi_f(N) / Lambda^N for the three G_m^4 tori over F_5.

Writes one file per system (N,pi,Pi_lo,Pi_hi) ready for an external plotting tool.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from fadzeta import catalog
from fadzeta.cli import main as cli_main

SYSTEMS = ("torus_f5_frobenius", "torus_f5_b", "torus_f5_c")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("directory", type=Path)
    ap.add_argument("--max", type=int, default=1000)
    ap.add_argument("--precision", type=int, default=128)
    args = ap.parse_args()
    args.directory.mkdir(parents=True, exist_ok=True)
    for name in SYSTEMS:
        catalog.load(name)  # fail early on a typo
        out = args.directory / f"{name}.csv"
        code = cli_main(["plot", "--input", f"@{name}", "--max", str(args.max), "--precision", str(args.precision), "--output", str(out)])
        if code:
            raise SystemExit(code)
        print(out)


if __name__ == "__main__":
    main()
