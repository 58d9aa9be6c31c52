"""Search procedures on the emulator: brute force, subspace projection and
Grover, plus solution counting and iterative extraction."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import numpy as np

from .gates import OracleSpec, grover_circuit, grover_plan, hadamard_layer
from .noise import NoiseParams, noisy_oracle
from .qmt import StateVector, basis_state, init_state, inner_product, subtract

__all__ = [
    "Method",
    "METHODS",
    "TrialRecord",
    "UnmeasurableState",
    "project_output_one",
    "measure_full",
    "prepare_uniform",
    "solution_count_probe",
    "brute_force_trial",
    "subspace_trial",
    "grover_trial",
    "run_trial",
    "estimate_solution_count",
    "extract_all_solutions",
    "repeated_success_probability",
]

Method = Literal["brute", "subspace", "grover"]
METHODS: tuple[Method, ...] = ("brute", "subspace", "grover")


class UnmeasurableState(ValueError):
    """Measurement requested on a zero-norm state."""


@dataclass(frozen=True)
class TrialRecord:
    method: Method
    outcome_x: int | None
    outcome_y: int | None
    success: bool
    oracle_calls: int
    seed: object = None


def project_output_one(psi: StateVector) -> StateVector:
    amps = psi.amps.copy()
    amps[0::2] = 0
    return psi.replace(amps)


def measure_full(psi: StateVector, rng: np.random.Generator) -> tuple[int, int]:
    """Born-rule sample of (x, y) using a single uniform draw."""
    w = np.abs(psi.amps) ** 2
    cdf = np.cumsum(w)
    total = cdf[-1]
    if not total > 0:
        raise UnmeasurableState("cannot measure a zero-norm state")
    idx = int(np.searchsorted(cdf, rng.random() * total, side="right"))
    idx = min(idx, len(w) - 1)
    # searchsorted can land on a zero-weight slot only through rounding at the top end
    while w[idx] == 0:
        idx -= 1
    return idx >> 1, idx & 1


@lru_cache(maxsize=64)
def prepare_uniform(n: int, s: float = 1.0) -> StateVector:
    return hadamard_layer(init_state(n, s))


def _record(method: Method, spec: OracleSpec, outcome, calls: int, seed) -> TrialRecord:
    if outcome is None:
        return TrialRecord(method, None, None, False, calls, seed)
    x, y = outcome
    return TrialRecord(method, x, y, bool(y == 1 and spec.f(x)), calls, seed)


def brute_force_trial(spec: OracleSpec, params: NoiseParams, rng: np.random.Generator, seed=None) -> TrialRecord:
    psi = noisy_oracle(prepare_uniform(spec.n, params.s), spec, params, rng)
    return _record("brute", spec, measure_full(psi, rng), 1, seed)


def subspace_trial(spec: OracleSpec, params: NoiseParams, rng: np.random.Generator, seed=None) -> TrialRecord:
    psi = project_output_one(noisy_oracle(prepare_uniform(spec.n, params.s), spec, params, rng))
    try:
        outcome = measure_full(psi, rng)
    except UnmeasurableState:
        outcome = None
    return _record("subspace", spec, outcome, 1, seed)


def grover_trial(spec: OracleSpec, params: NoiseParams, rng: np.random.Generator, seed=None) -> TrialRecord:
    plan = grover_plan(spec.N, spec.M)
    # for M > N/2 the iterations query 1 - f; success is still judged against f
    query = spec.complement() if plan.complemented else spec
    psi = grover_circuit(
        prepare_uniform(spec.n, params.s),
        plan.R,
        lambda p: noisy_oracle(p, query, params, rng),
    )
    return _record("grover", spec, measure_full(psi, rng), plan.R, seed)


_TRIALS = {"brute": brute_force_trial, "subspace": subspace_trial, "grover": grover_trial}


def run_trial(method: Method, spec: OracleSpec, params: NoiseParams, rng: np.random.Generator, seed=None) -> TrialRecord:
    try:
        fn = _TRIALS[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}") from None
    return fn(spec, params, rng, seed)


def solution_count_probe(n: int, s: float = 1.0) -> StateVector:
    """Auxiliary state (s/sqrt(N)) sum_x |x, 1> used to read off the solution count."""
    N = 1 << n
    amps = np.zeros(2 * N, dtype=np.complex128)
    amps[1::2] = s / math.sqrt(N)
    return StateVector(n, amps, s)


def _raw_count(psi: StateVector) -> complex:
    return psi.N / psi.s ** 2 * inner_product(solution_count_probe(psi.n, psi.s), psi)


def _round_count(m: complex) -> int:
    return math.floor(abs(m) + 0.5)


def estimate_solution_count(spec: OracleSpec, params: NoiseParams, rng: np.random.Generator) -> tuple[complex, int]:
    """(M~, M^): the raw complex count from one noisy oracle call and its rounding."""
    psi = project_output_one(noisy_oracle(prepare_uniform(spec.n, params.s), spec, params, rng))
    m = _raw_count(psi)
    return m, _round_count(m)


def extract_all_solutions(
    spec: OracleSpec,
    params: NoiseParams,
    rng: np.random.Generator,
    max_iters: int = 64,
) -> list[int]:
    """Find every solution from a single noisy oracle call.

    After projecting onto y = 1, repeatedly estimate the remaining count,
    measure, and subtract the reconstructed solution component. A repeated
    outcome is not subtracted twice; it still consumes an iteration.
    """
    if max_iters < 1:
        raise ValueError(f"max_iters must be >= 1, got {max_iters}")
    psi = project_output_one(noisy_oracle(prepare_uniform(spec.n, params.s), spec, params, rng))
    comp = params.s / math.sqrt(spec.N)
    found: list[int] = []
    for _ in range(max_iters):
        if _round_count(_raw_count(psi)) == 0:
            break
        try:
            x, _ = measure_full(psi, rng)
        except UnmeasurableState:
            break
        if x in found:
            continue
        found.append(x)
        psi = subtract(psi, basis_state(spec.n, x, 1, comp, params.s))
    return found


def repeated_success_probability(p, k):
    """1 - (1 - p)^k, the chance of at least one success in k independent tries."""
    p = np.asarray(p, dtype=float)
    k = np.asarray(k, dtype=float)
    if np.any((p < 0) | (p > 1)) or np.any(k < 0):
        raise ValueError("need 0 <= p <= 1 and k >= 0")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = -np.expm1(k * np.log1p(-p))
    out = np.where(k == 0, 0.0, np.where(p == 1, 1.0, out))
    return float(out) if out.ndim == 0 else out
