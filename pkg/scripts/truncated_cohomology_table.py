"""Truncated Poisson cohomology and canonical H0 dimensions by degree bound."""

import argparse
from pathlib import Path

from poissonkit.files import load_structure
from poissonkit.homology import casimir_distributions, h0_canonical, homology

ROOT = Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("structures", nargs="*", default=["so3", "r2_symplectic", "singular_r2", "r4_symplectic"])
    ap.add_argument("--max-degree", type=int, default=3)
    args = ap.parse_args()
    for name in args.structures:
        p = load_structure(ROOT / "data" / f"{name}.json")
        n = p.num_vars
        print(f"{name} ({n} variables)")
        print("  bound  " + "  ".join(f"H^{k}" for k in range(n + 1)) + "   H_0  F_0")
        for d in range(args.max_degree + 1):
            dims = []
            for k in range(n + 1):
                flavor = "function" if k == 0 else "multivector"
                dims.append(homology("lichnerowicz", p, flavor, k, d).homology_dim)
            h0 = h0_canonical(p, d).dimension
            f0 = len(casimir_distributions(p, d))
            print(f"  {d:>5}  " + "  ".join(f"{x:>3}" for x in dims) + f"  {h0:>4} {f0:>4}")


if __name__ == "__main__":
    main()
