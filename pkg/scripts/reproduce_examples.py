"""Run the four example configurations through the command-line front end.

Writes one directory per example under ``--out`` (default ``runs/``):

* example1, example2: ``solve``, ``resonance`` and ``field`` outputs;
* example3, example4: ``solve`` and ``converge`` outputs;

then runs ``verify`` and prints a short summary of the key numbers.

Usage::

    python scripts/reproduce_examples.py [--out runs] [--threads N]
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

from specbem import cli

ROOT = Path(__file__).resolve().parents[1]
CONFIGS = ROOT / "configs"

PLAN = {
    "example1": ("solve", "resonance", "field"),
    "example2": ("solve", "resonance", "field"),
    "example3": ("solve", "converge"),
    "example4": ("solve", "converge"),
}


def _rows(path: Path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def summarize(name: str, out: Path) -> None:
    if (out / "resonances.csv").exists():
        for r in _rows(out / "resonances.csv"):
            print(f"  {name}: resonance m={r['m']} kappa*={float(r['re_kappa']):.6f}"
                  f"{float(r['im_kappa']):+.4e}i")
    if (out / "radial.csv").exists():
        rows = _rows(out / "radial.csv")
        mags = [abs(complex(float(r["re"]), float(r["im"]))) for r in rows]
        i = max(range(len(mags)), key=mags.__getitem__)
        print(f"  {name}: radial peak |u|={mags[i]:.4g} at r={float(rows[i]['r']):.4f}")
    if (out / "eoc.csv").exists():
        for r in _rows(out / "eoc.csv"):
            print(f"  {name}: {r['error']} slope={float(r['algebraic_slope']):.3f} "
                  f"rate={float(r['exponential_rate']):.3f} r2={float(r['r2_exponential']):.3f}")
        env = json.loads((out / "envelope.json").read_text(encoding="utf-8"))
        print(f"  {name}: envelope check over M={env['M_in_hypothesis']}: {env['passed']}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=ROOT / "runs")
    parser.add_argument("--threads", type=int, default=1)
    args = parser.parse_args(argv)
    status = 0
    for name, commands in PLAN.items():
        out = args.out / name
        for command in commands:
            t0 = time.perf_counter()
            code = cli.main([command, "--config", str(CONFIGS / f"{name}.json"),
                             "--out", str(out), "--threads", str(args.threads)])
            print(f"{name} {command}: exit {code} ({time.perf_counter() - t0:.2f} s)")
            status = status or code
        summarize(name, out)
    code = cli.main(["verify", "--threads", str(args.threads)])
    print(f"verify: exit {code}")
    return status or code


if __name__ == "__main__":
    sys.exit(main())
