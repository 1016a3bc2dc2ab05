#!/usr/bin/env python3
"""Regenerate the bundled seed table of nontrivial zeta zero ordinates.

Writes src/fraczeta/data/zeros_seed.csv with the first COUNT ordinates at
18 significant digits.  The library never trusts these digits: every
zero-dependent verification re-validates them with its own Newton
refinement at startup.  mpmath is only a build-time convenience here and
is not a runtime dependency of the package.
"""

import argparse
from pathlib import Path

import mpmath as mp

DEFAULT_OUT = Path(__file__).resolve().parents[1] / "src" / "fraczeta" / "data" / "zeros_seed.csv"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--out", type=Path, default=DEFAULT_OUT)
    args = ap.parse_args()

    mp.mp.dps = 30
    rows = []
    prev = mp.mpf(0)
    for j in range(1, args.count + 1):
        gamma = mp.im(mp.zetazero(j))
        if gamma <= prev + mp.mpf("0.1"):
            raise RuntimeError(f"ordinate spacing check failed at index {j}")
        rows.append((j, mp.nstr(gamma, 18)))
        prev = gamma

    args.out.parent.mkdir(parents=True, exist_ok=True)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("index,gamma\n")
        for j, g in rows:
            fh.write(f"{j},{g}\n")
    print(f"wrote {len(rows)} ordinates to {args.out}")


if __name__ == "__main__":
    main()
