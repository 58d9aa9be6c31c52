"""Exact-recovery rate of iterative extraction from one noisy oracle call, vs SNR.

    python3 scripts/extract_solutions.py --snr 1e4,1e5,1e6
"""
import argparse

from qmtsearch.harness import ExperimentConfig, run_extract


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--solutions", default="2,7,11")
    ap.add_argument("--snr", default="1e4,1e5,1e6")
    ap.add_argument("--trials", type=int, default=1000)
    args = ap.parse_args()

    sols = tuple(int(t) for t in args.solutions.split(","))
    cfg = ExperimentConfig(n=4, solutions=sols, trials=args.trials)
    for snr in (float(t) for t in args.snr.split(",")):
        print(f"S2={snr:g}: exact recovery {run_extract(cfg, snr=snr).exact_rate():.3f}")


if __name__ == "__main__":
    main()
