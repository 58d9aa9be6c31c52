"""Empirical distribution of the rounded solution-count estimate vs the Rician closed form.

    python3 scripts/count_distribution.py --solutions 2,7,11 --snr 25,100
"""
import argparse

from qmtsearch.harness import ExperimentConfig, run_count_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--solutions", default="2,7,11")
    ap.add_argument("--snr", default="25,100")
    ap.add_argument("--trials", type=int, default=100_000)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="count.csv")
    args = ap.parse_args()

    sols = tuple(int(t) for t in args.solutions.split(",") if t.strip())
    cfg = ExperimentConfig(
        n=args.n, solutions=sols, snr_grid=tuple(float(t) for t in args.snr.split(",")),
        trials=args.trials, workers=args.workers, out_path=args.out,
    )
    res = run_count_experiment(cfg)
    for s in res.summaries:
        print(f"S2={s.snr:g}: TV={s.tv_distance:.4f}  mean |M~| {s.mean_abs:.4f} (theory {s.mean_theory:.4f})"
              f"  var {s.var_abs:.4f} (theory {s.var_theory:.4f})")
    for r in res.rows:
        if r.count or r.p_theory > 1e-4:
            print(f"  S2={r.snr:g} m={r.m:2d}  p_hat={r.p_hat:.4f}  p_theory={r.p_theory:.4f}")


if __name__ == "__main__":
    main()
