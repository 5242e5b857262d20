#!/usr/bin/env python3
"""Regenerate the golden coordinate files under tests/golden/.

Each file is the byte-exact CLI JSON output for one (q, n) grid cell of
the omega-route period coordinates at u-precision 6n(q-1)+40.  Run from
anywhere; paths are anchored to this script's location.
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from carlitzhd.cli import main

GRID_Q = (2, 3, 4, 5)
GRID_N = (1, 2, 3, 4, 5, 6)


def golden_dir() -> str:
    return os.path.abspath(
        os.path.join(os.path.dirname(__file__), "..", "tests", "golden"))


def cell_args(q: int, n: int, out_path: str) -> list[str]:
    uprec = 6 * n * (q - 1) + 40
    return [
        "coords", "--q", str(q), "--n", str(n), "--route", "omega",
        "--uprec", str(uprec), "--json", "--out", out_path,
    ]


def regen() -> None:
    os.environ.pop("CARLITZHD_OUT_DIR", None)
    dest = golden_dir()
    os.makedirs(dest, exist_ok=True)
    for q in GRID_Q:
        for n in GRID_N:
            path = os.path.join(dest, f"coords_q{q}_n{n}.json")
            code = main(cell_args(q, n, path))
            if code != 0:
                raise SystemExit(f"cell q={q} n={n} exited {code}")
            print(f"wrote {path}")


if __name__ == "__main__":
    regen()
