"""Measure the RK4 Casimir drift constant on so(3) and pin it.

drift(dt) / (dt^4 * T) is evaluated for seeded quadratic Hamiltonians over a
range of step sizes; the worst ratio, doubled, is written to
tests/golden/casimir_drift.json.
"""

import argparse
import json
from pathlib import Path

import numpy as np

from poissonkit.checks import RandomSource
from poissonkit.files import load_structure
from poissonkit.numeric import FlowSpec, compile_poly, flow
from poissonkit.ring import parse_poly

ROOT = Path(__file__).resolve().parents[1]


def measure(seed, count, step_sizes, duration, start):
    p = load_structure(ROOT / "data" / "so3.json")
    casimir = compile_poly(parse_poly("x^2 + y^2 + z^2", p.names))
    src = RandomSource(seed)
    hams = [src.poly(3, 2, 4) for _ in range(count)]
    rows = []
    for dt in step_sizes:
        worst = 0.0
        for h in hams:
            traj = flow(p, FlowSpec(h, start, duration, round(duration / dt)))
            drift = float(np.abs(casimir(traj) - casimir(traj[0])).max())
            worst = max(worst, drift / (dt ** 4 * duration))
        rows.append((dt, worst))
    return hams, rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=10)
    ap.add_argument("--write", action="store_true", help="update the golden file")
    args = ap.parse_args()
    start = (0.6, -0.3, 0.7)
    hams, rows = measure(args.seed, args.count, (0.2, 0.1, 0.05, 0.025), 1.0, start)
    for dt, ratio in rows:
        print(f"dt={dt:<6} drift/(dt^4 T) = {ratio:.6g}")
    constant = 2 * max(r for _, r in rows)
    print(f"pinned constant C = {constant:.6g}")
    if args.write:
        out = {
            "seed": args.seed,
            "hamiltonians": [h.to_str(("x", "y", "z")) for h in hams],
            "start": list(start),
            "duration": 1.0,
            "measured": [{"dt": dt, "ratio": r} for dt, r in rows],
            "constant": float(f"{constant:.3g}"),
        }
        path = ROOT / "tests" / "golden" / "casimir_drift.json"
        path.write_text(json.dumps(out, indent=2) + "\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
