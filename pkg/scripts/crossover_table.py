"""Classify where subspace projection beats a single Grover run, per (N, M).

Prints the closed-form regime and checks it against sign changes of
p_S - p_G on a dense SNR grid.
"""
import argparse

import numpy as np

from qmtsearch import analytics


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, nargs="+", default=[8, 16, 32, 64])
    args = ap.parse_args()

    grid = np.logspace(-2, 8, 20001)
    for N in args.N:
        for M in range(N + 1):
            c = analytics.crossover_snr(N, M)
            d = np.asarray(analytics.p_subspace(N, M, grid)) - np.asarray(analytics.p_grover(N, M, grid))
            losing = grid[d < -1e-12]
            span = f"p_S < p_G on [{losing[0]:.4g}, {losing[-1]:.4g}]" if len(losing) else "p_S >= p_G on grid"
            roots = ""
            if c.kind == "interval":
                roots = f" S-^2={c.s_minus_sq:.4g} S+^2={c.s_plus_sq:.4g}"
            elif c.kind == "linear_threshold":
                roots = f" S0^2={c.s0_sq:.4g}"
            print(f"N={N:3d} M={M:3d}  {c.kind:17s}{roots:32s} {span}")


if __name__ == "__main__":
    main()
