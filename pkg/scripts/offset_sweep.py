"""MSE versus frequency offset for 16-QAM (N1=512) and 64-QAM (N1=1024).

Writes one CSV per format and prints the apFFT mean and the max/min spread
for every algorithm.

    python3 scripts/offset_sweep.py --trials 100 --osnr 30 --outdir results
"""

import argparse
from pathlib import Path

import numpy as np

from apfoe import harness


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--osnr", type=float, default=30.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=4)
    ap.add_argument("--outdir", type=Path, default=Path("results"))
    args = ap.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)

    for fmt, n1 in ((16, 512), (64, 1024)):
        cfg = harness.SweepConfig(
            format=fmt, n1=n1, n2=n1 // 2, osnr_values=[args.osnr],
            trials_per_point=args.trials, master_seed=args.seed,
        )
        rows = harness.sweep_offsets(cfg, threads=args.threads)
        path = args.outdir / f"offset_sweep_{fmt}qam.csv"
        path.write_text(harness.to_csv(rows, harness.OFFSET_COLUMNS))
        print(f"{fmt}QAM -> {path}")
        for algo, mse in harness.mse_table(rows).items():
            mse = np.asarray(mse)
            spread = mse.max() / mse.min() if mse.min() > 0 else float("inf")
            print(f"  {algo:8s} mean {mse.mean():.3e}  max/min {spread:.3g}")


if __name__ == "__main__":
    main()
