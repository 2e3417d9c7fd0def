#!/usr/bin/env python3
"""Compare the limiting velocity density against the exact walk.

For each chosen coin, bins the exact p(x, t) over v = x/t and writes it next
to the predicted density; prints the L1 distance between the two."""

import argparse
import math
from pathlib import Path

import numpy as np

from coinwalk.asymptotics import weak_limit_density
from coinwalk.coins import preset_coin
from coinwalk.export import write_csv
from coinwalk.walk import InitialCondition, distribution, evolve


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=1000)
    ap.add_argument("--bins", type=int, default=32)
    ap.add_argument("--outdir", default="out")
    args = ap.parse_args()

    init = InitialCondition(np.array([1.0, 0.0]))
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    width = 2.0 / args.bins

    cases = {
        "hadamard_analog": preset_coin("hadamard_analog"),
        "paper_xy_quarter": preset_coin("paper_xy", theta=math.pi / 4, phi=math.pi / 4),
    }
    for name, coin in cases.items():
        vd = weak_limit_density(coin, init, bins=args.bins)
        emp = np.zeros(args.bins)
        for x, p in distribution(evolve(init, coin, args.steps)).items():
            emp[min(args.bins - 1, int((x / args.steps + 1.0) / width))] += p
        l1 = float(np.abs(vd.density * width - emp).sum())
        out = outdir / f"weak_limit_{name}.csv"
        write_csv(
            out,
            ["v", "predicted_density", "empirical_density"],
            zip(map(float, vd.v_grid), map(float, vd.density), (float(m / width) for m in emp)),
        )
        print(f"{name}: L1 distance {l1:.4f} at t={args.steps}; wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
