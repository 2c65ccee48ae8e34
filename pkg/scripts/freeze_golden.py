"""Regenerate ``tests/data/golden_bessel.json`` from the mpmath oracle.

The acceptance grid is evaluated for J, Y, H^(1) and the derivatives of J
and H^(1).  Every J value is computed twice (power series and backward
recurrence) and every Y value is compared with ``mpmath.bessely``; the
script aborts on any disagreement beyond 1e-25.

Usage::

    python scripts/freeze_golden.py [--out tests/data/golden_bessel.json]
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import mpmath as mp

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

import oracle  # noqa: E402

ORDERS = [0, 1, 2, 5, 10, 20, 40, 60, 100, 200, 300, 400]
REAL_ARGS = [0.5, 1.0, 2.0, 5.0, 10.0, 45.055, 63.72, 90.11, 131.97, 200.0]
# a handful of complex arguments in the resonance strip and off-axis
COMPLEX_ARGS = [complex(3.0, 0.3), complex(31.86, -0.0007), complex(63.72, -0.001),
                complex(20.0, 5.0), complex(0.7, 0.2)]
COMPLEX_ORDERS = [0, 1, 3, 30, 40, 60]
NAMES = ["J", "Y", "H", "Jp", "Hp"]


def _entry(name: str, m: int, z: complex) -> dict:
    value = oracle.evaluate(name, m, z)
    re, im, k = oracle.to_scaled_pair(value)
    return {"name": name, "m": m, "z": [z.real, z.imag], "re": re, "im": im, "exp": k}


def build() -> dict:
    entries = []
    points = [(m, complex(z)) for m in ORDERS for z in REAL_ARGS]
    points += [(m, z) for m in COMPLEX_ORDERS for z in COMPLEX_ARGS]
    for m, z in points:
        series = oracle.j_series(m, z)
        miller = oracle.j_miller(m, z)
        with mp.workdps(40):
            if series != 0 and abs(miller / series - 1) > mp.mpf("1e-25"):
                raise RuntimeError(f"oracle disagreement for J_{m}({z}): {series} vs {miller}")
        y_ours = oracle.y_series(m, z)
        with mp.workdps(oracle.DIGITS + 10):
            y_ref = mp.bessely(m, z)
            if abs(y_ours / y_ref - 1) > mp.mpf("1e-25"):
                raise RuntimeError(f"oracle disagreement for Y_{m}({z}): {y_ours} vs {y_ref}")
        for name in NAMES:
            entries.append(_entry(name, m, z))
    return {
        "digits": oracle.DIGITS,
        "orders": ORDERS,
        "real_args": REAL_ARGS,
        "entries": entries,
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=ROOT / "tests" / "data" / "golden_bessel.json")
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    payload = build()
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps(payload, indent=1) + "\n")
    print(f"wrote {len(payload['entries'])} values to {args.out} "
          f"in {time.perf_counter() - t0:.1f} s")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
