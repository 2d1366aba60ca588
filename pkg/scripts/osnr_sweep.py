"""MSE versus OSNR, pooled over the +-3.5 GHz offset grid."""

import argparse
from pathlib import Path

from apfoe import harness

GRID = [6, 8, 10, 12, 14, 16, 18, 20, 25, 30]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=20, help="per offset point")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=4)
    ap.add_argument("--outdir", type=Path, default=Path("results"))
    args = ap.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)

    for fmt, n1 in ((16, 512), (64, 1024)):
        cfg = harness.SweepConfig(
            format=fmt, n1=n1, n2=n1 // 2, osnr_values=[float(o) for o in GRID],
            trials_per_point=args.trials, master_seed=args.seed,
        )
        rows = harness.sweep_osnr(cfg, threads=args.threads)
        path = args.outdir / f"osnr_sweep_{fmt}qam.csv"
        path.write_text(harness.to_csv(rows, harness.OSNR_COLUMNS))
        table = harness.mse_table(rows)
        print(f"{fmt}QAM -> {path}")
        print("  OSNR  " + "  ".join(f"{a:>10s}" for a in table))
        for i, osnr in enumerate(GRID):
            print(f"  {osnr:4d}  " + "  ".join(f"{table[a][i]:10.3e}" for a in table))


if __name__ == "__main__":
    main()
