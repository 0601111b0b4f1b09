"""Gauss-Legendre convergence of leaf integrals on the unit so(3) sphere."""

import argparse
import math
from pathlib import Path

from poissonkit.files import load_chart, load_structure
from poissonkit.numeric import leaf_integrate
from poissonkit.ring import parse_poly

ROOT = Path(__file__).resolve().parents[1]

EXACT = {"1": 4 * math.pi, "z^2": 4 * math.pi / 3, "x^2*y^2": 4 * math.pi / 15}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-nodes", type=int, default=64)
    args = ap.parse_args()
    p = load_structure(ROOT / "data" / "so3.json")
    chart = load_chart(ROOT / "data" / "sphere_chart.json")
    print(f"{'nodes':>7} " + " ".join(f"{k:>12}" for k in EXACT))
    k = 4
    while k <= args.max_nodes:
        c = chart.with_nodes((k, k))
        errs = [abs(leaf_integrate(p, c, parse_poly(f, p.names)) - v) for f, v in EXACT.items()]
        print(f"{k:>3}x{k:<3} " + " ".join(f"{e:12.3e}" for e in errs))
        k *= 2


if __name__ == "__main__":
    main()
