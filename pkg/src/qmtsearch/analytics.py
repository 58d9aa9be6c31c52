"""Closed-form success probabilities, count-estimate statistics and the
special functions behind them.

Probabilities are parameterized by (N, M, snr) with snr = s^2 T / sigma^2;
``snr = inf`` is the noiseless oracle and evaluates exactly (1/inf == 0).
The p_* functions broadcast over numpy arrays of snr.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy import integrate, special

from .gates import GroverPlan, grover_plan
from .search import repeated_success_probability

__all__ = [
    "MethodCurvePoint",
    "Crossover",
    "p_brute",
    "p_subspace",
    "p_grover",
    "method_curve_point",
    "crossover_snr",
    "pg_minus_ps_sign",
    "rician_mean_var",
    "count_estimate_pmf",
    "marcum_q1",
    "laguerre_half",
    "clopper_pearson",
]


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def _inv(snr):
    with np.errstate(divide="ignore"):
        return 1.0 / np.asarray(snr, dtype=float)


def p_brute(N: int, M: int, snr):
    u = _inv(snr)
    return _out((M / N + M * u) / (1.0 + 2 * N * u))


def p_subspace(N: int, M: int, snr):
    u = _inv(snr)
    if M == 0:
        return _out(np.zeros_like(u))
    return _out((M / N + M * u) / (M / N + N * u))


def p_grover(N: int, M: int, snr, plan: GroverPlan | None = None):
    u = _inv(snr)
    if M == 0:
        return _out(np.zeros_like(u))
    plan = plan or grover_plan(N, M)
    R, th = plan.R, plan.theta
    amp2 = math.sin(R * th + th / 2) ** 2
    return _out((amp2 + M * R * u) / (1.0 + 2 * N * R * u))


@dataclass(frozen=True)
class MethodCurvePoint:
    N: int
    M: int
    snr: float
    p_b: float
    p_s: float
    p_g: float
    P_b: float  # brute force repeated N times
    P_s: float  # subspace repeated R + 1 times (same oracle budget as Grover plus one)
    R: int
    theta: float


def method_curve_point(N: int, M: int, snr: float) -> MethodCurvePoint:
    plan = grover_plan(N, M)
    pb, ps = p_brute(N, M, snr), p_subspace(N, M, snr)
    return MethodCurvePoint(
        N, M, snr, pb, ps, p_grover(N, M, snr, plan),
        repeated_success_probability(pb, N),
        repeated_success_probability(ps, plan.R + 1),
        plan.R, plan.theta,
    )


@dataclass(frozen=True)
class Crossover:
    """Where subspace projection beats a single Grover run.

    kind:
      equal_everywhere   p_S == p_G for every snr (M = 0 or M = N)
      always_pS_ge       p_S >= p_G for every snr
      linear_threshold   p_S > p_G below s0_sq, p_S < p_G above
      interval           p_S < p_G only for s_minus_sq < snr < s_plus_sq
    """

    kind: Literal["equal_everywhere", "always_pS_ge", "linear_threshold", "interval"]
    s0_sq: float | None = None
    s_minus_sq: float | None = None
    s_plus_sq: float | None = None


def _crossover_coeffs(N: int, M: int):
    # p_S - p_G has the sign of  a*S^4 - b*S^2 + c
    plan = grover_plan(N, M)
    phase = plan.R * plan.theta + plan.theta / 2
    a = M * math.cos(phase) ** 2
    b = N * N * math.sin(phase) ** 2 - M * (2 * N * plan.R + N - M * plan.R)
    c = M * N * N * plan.R
    return a, b, c


def crossover_snr(N: int, M: int) -> Crossover:
    if not 0 <= M <= N:
        raise ValueError(f"M={M} out of range for N={N}")
    if M == 0 or M == N:
        return Crossover("equal_everywhere")
    a, b, c = _crossover_coeffs(N, M)
    # with R = 0, b is exactly zero analytically; keep rounding noise from faking a root
    if abs(b) <= 1e-12 * N * N:
        b = 0.0
    # cos(R theta + theta/2) vanishes analytically at M = N/4 but not in floating point
    if a <= 1e-12 * max(abs(b), c, 1.0):
        if b > 0:
            return Crossover("linear_threshold", s0_sq=c / b)
        return Crossover("always_pS_ge")
    disc = b * b - 4 * a * c
    if b <= 0 or disc <= 0:
        return Crossover("always_pS_ge")
    root = math.sqrt(disc)
    # stable quadratic roots
    s_plus = (b + root) / (2 * a)
    s_minus = c / (a * s_plus)
    return Crossover("interval", s_minus_sq=s_minus, s_plus_sq=s_plus)


def pg_minus_ps_sign(N: int, M: int, snr):
    """sign(p_G - p_S) evaluated directly from the closed forms."""
    return np.sign(np.asarray(p_grover(N, M, snr)) - np.asarray(p_subspace(N, M, snr)))


def laguerre_half(x):
    """L_{1/2}(x) for x <= 0 via exponentially scaled Bessel functions."""
    x = np.asarray(x, dtype=float)
    if np.any(x > 0):
        raise ValueError("laguerre_half is only defined here for x <= 0")
    z = -x / 2.0
    return _out((1.0 - x) * special.i0e(z) - x * special.i1e(z))


def rician_mean_var(N: int, M: int, s: float, sigma2: float, T: float) -> tuple[float, float]:
    """Mean and variance of |M~|, the modulus of the raw solution-count estimate."""
    if sigma2 == 0:
        return float(M), 0.0
    total_var = N * N * sigma2 / (s * s * T)
    mean = (N * math.sqrt(sigma2) / (2 * s)) * math.sqrt(math.pi / T) * laguerre_half(-M * M / total_var)
    return float(mean), float(total_var + M * M - mean * mean)


_SERIES_LAMBDA_MAX = 2.0e4


def _marcum_series(a: float, b: float) -> float:
    lam = 0.5 * a * a
    x = 0.5 * b * b
    if lam == 0:
        return math.exp(-x)
    spread = 12.0 * math.sqrt(lam) + 40.0
    k = np.arange(max(0, int(lam - spread)), int(lam + spread) + 1)
    logw = -lam + k * math.log(lam) - special.gammaln(k + 1)
    w = np.exp(logw)
    return float(np.sum(w * special.gammaincc(k + 1, x)))


def _marcum_quad(a: float, b: float) -> float:
    def density(r):
        return r * math.exp(-0.5 * (r - a) ** 2) * special.i0e(a * r)

    # the mass sits within a few units of r = a; integrate the short side
    if b >= a:
        return integrate.quad(density, b, b + 40.0, epsabs=1e-13, limit=200)[0]
    lo = max(0.0, a - 40.0)
    return 1.0 - integrate.quad(density, lo, b, epsabs=1e-13, limit=200)[0]


def marcum_q1(a: float, b: float) -> float:
    """First-order Marcum Q, i.e. P[Rice(a, 1) > b].

    Poisson mixture of regularized upper incomplete gamma functions; very
    large noncentrality falls back to direct quadrature of the Rice density.
    """
    if a < 0 or b < 0:
        raise ValueError("marcum_q1 needs a >= 0 and b >= 0")
    if b == 0:
        return 1.0
    if 0.5 * a * a > _SERIES_LAMBDA_MAX:
        return min(1.0, max(0.0, _marcum_quad(a, b)))
    return min(1.0, max(0.0, _marcum_series(a, b)))


def count_estimate_pmf(m: int, N: int, M: int, s: float, sigma2: float, T: float) -> float:
    """P[round-half-up(|M~|) == m] from the Rician CDF of |M~|."""
    if m < 0:
        return 0.0
    if sigma2 == 0:
        return float(m == M)
    tau = N * math.sqrt(sigma2 / (2 * s * s * T))
    nu = M / tau
    lo = 1.0 if m == 0 else marcum_q1(nu, (m - 0.5) / tau)
    return max(0.0, lo - marcum_q1(nu, (m + 0.5) / tau))


def clopper_pearson(k: int, n: int, alpha: float = 0.05) -> tuple[float, float]:
    """Exact two-sided binomial interval from beta-distribution quantiles."""
    if n <= 0:
        raise ValueError(f"need at least one trial, got n={n}")
    if not 0 <= k <= n:
        raise ValueError(f"k={k} out of range [0, {n}]")
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    lo = 0.0 if k == 0 else float(special.betaincinv(k, n - k + 1, alpha / 2))
    hi = 1.0 if k == n else float(special.betaincinv(k + 1, n - k, 1 - alpha / 2))
    return lo, hi
