"""Monte Carlo sweeps, analytic tables, count experiments and engine
cross-validation, with deterministic per-trial seeding and CSV output."""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import analytics
from .gates import OracleSpec, apply_oracle, grover_plan, hadamard, hadamard_layer
from .noise import NoiseParams, sigma2_for_fidelity, TWO_PI
from .qmt import StateVector, init_state, inner_product
from .search import (
    METHODS,
    Method,
    estimate_solution_count,
    extract_all_solutions,
    project_output_one,
    repeated_success_probability,
    run_trial,
)
from .signal import (
    SampledWaveform,
    demodulate,
    signal_hadamard,
    signal_inner_product,
    signal_oracle,
    signal_project_output_one,
    synthesize,
)

__all__ = [
    "ExperimentConfig",
    "SweepRow",
    "SweepResult",
    "Fig2Row",
    "CountResult",
    "ValidationReport",
    "SWEEP_HEADER",
    "FIG1_SNR_GRID",
    "resolve_spec",
    "snr_values",
    "trial_seed",
    "run_sweep",
    "run_fig1",
    "run_fig2",
    "run_count_experiment",
    "run_validate_signal",
    "run_extract",
    "format_float",
    "write_csv",
]

SWEEP_HEADER = (
    "method", "n", "N", "M", "snr", "trials", "successes",
    "p_hat", "ci_lo", "ci_hi", "p_theory", "oracle_calls", "degenerate",
)

FIG1_SNR_GRID = tuple(float(x) for x in np.logspace(-2, 4, 12))

# stream tags keep the seed spaces of different experiment kinds disjoint
_TAG_PLACEMENT = 0x51A7
_TAG_TRIAL = 0x7121
_TAG_COUNT = 0xC0C7
_TAG_EXTRACT = 0xE87A


@dataclass(frozen=True)
class ExperimentConfig:
    n: int = 4
    solutions: tuple[int, ...] | None = None
    num_solutions: int | None = 3
    snr_grid: tuple[float, ...] = FIG1_SNR_GRID
    fidelity_grid: tuple[float, ...] | None = None
    trials: int = 1000
    methods: tuple[Method, ...] = METHODS
    base_seed: int = 0
    alpha: float = 0.05
    out_path: str | None = None
    workers: int = 1
    s: float = 1.0
    T: float = TWO_PI

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.solutions is None and self.num_solutions is None:
            raise ValueError("give either explicit solutions or a solution count")
        if self.solutions is None and not 0 <= self.num_solutions <= (1 << self.n):
            raise ValueError(f"num_solutions={self.num_solutions} out of range for n={self.n}")
        if any(not v > 0 for v in self.snr_grid):
            raise ValueError("SNR values must be positive (use inf for a noiseless oracle)")
        bad = set(self.methods) - set(METHODS)
        if bad:
            raise ValueError(f"unknown methods {sorted(bad)}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")


def resolve_spec(config: ExperimentConfig) -> OracleSpec:
    if config.solutions is not None:
        return OracleSpec(config.n, tuple(config.solutions))
    rng = np.random.default_rng([config.base_seed, _TAG_PLACEMENT])
    return OracleSpec.random(config.n, config.num_solutions, rng)


def snr_values(config: ExperimentConfig) -> tuple[float, ...]:
    """SNR grid, converting a fidelity grid through the sigma^2(F) inverse if one is set."""
    if config.fidelity_grid is None:
        return tuple(config.snr_grid)
    N = 1 << config.n
    out = []
    for F in config.fidelity_grid:
        sigma2 = sigma2_for_fidelity(N, config.s, config.T, F)
        out.append(math.inf if sigma2 == 0 else config.s ** 2 * config.T / sigma2)
    return tuple(out)


def trial_seed(base_seed: int, method: str, snr_index: int, trial_index: int) -> tuple[int, ...]:
    """Entropy for one trial's stream; a pure function of its coordinates."""
    return (base_seed, _TAG_TRIAL, METHODS.index(method), snr_index, trial_index)


def format_float(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.12g}"


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return format_float(v)
    return str(v)


def write_csv(rows: Iterable, header: Sequence[str], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(getattr(row, h)) for h in header])


class _CsvMixin:
    header: tuple[str, ...] = ()
    rows: list

    def to_csv(self, path: str | None = None) -> str:
        buf = io.StringIO()
        write_csv(self.rows, self.header, buf)
        text = buf.getvalue()
        if path:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text


@dataclass(frozen=True)
class SweepRow:
    method: Method
    n: int
    N: int
    M: int
    snr: float
    trials: int
    successes: int
    p_hat: float
    ci_lo: float
    ci_hi: float
    p_theory: float
    oracle_calls: int
    degenerate: bool

    @property
    def covered(self) -> bool:
        return self.ci_lo <= self.p_theory <= self.ci_hi


@dataclass
class SweepResult(_CsvMixin):
    rows: list[SweepRow] = field(default_factory=list)
    header = SWEEP_HEADER

    def coverage(self) -> float:
        """Fraction of rows whose closed-form value lies inside the CI."""
        return sum(r.covered for r in self.rows) / len(self.rows)

    def select(self, method: str) -> list[SweepRow]:
        return [r for r in self.rows if r.method == method]


_THEORY: dict[str, Callable] = {
    "brute": analytics.p_brute,
    "subspace": analytics.p_subspace,
    "grover": analytics.p_grover,
}


def _run_point(args) -> tuple[int, int, bool]:
    method, spec, params, base_seed, snr_index, start, stop = args
    successes = calls = 0
    degenerate = False
    for t in range(start, stop):
        seed = trial_seed(base_seed, method, snr_index, t)
        rec = run_trial(method, spec, params, np.random.default_rng(seed), seed)
        successes += rec.success
        calls += rec.oracle_calls
        degenerate |= rec.outcome_x is None
    return successes, calls, degenerate


def _chunks(trials: int, workers: int) -> list[tuple[int, int]]:
    if workers == 1:
        return [(0, trials)]
    step = max(1, math.ceil(trials / (4 * workers)))
    return [(a, min(a + step, trials)) for a in range(0, trials, step)]


def run_sweep(config: ExperimentConfig) -> SweepResult:
    spec = resolve_spec(config)
    snrs = snr_values(config)
    tasks, keys = [], []
    for method in config.methods:
        for i, snr in enumerate(snrs):
            params = NoiseParams.from_snr(snr, config.s, config.T)
            for a, b in _chunks(config.trials, config.workers):
                tasks.append((method, spec, params, config.base_seed, i, a, b))
                keys.append((method, i))
    if config.workers == 1:
        results = list(map(_run_point, tasks))
    else:
        with ProcessPoolExecutor(config.workers) as pool:
            results = list(pool.map(_run_point, tasks))

    agg: dict[tuple[str, int], list] = {}
    for key, (succ, calls, deg) in zip(keys, results):
        acc = agg.setdefault(key, [0, 0, False])
        acc[0] += succ
        acc[1] += calls
        acc[2] |= deg

    out = SweepResult()
    for method in config.methods:
        for i, snr in enumerate(snrs):
            succ, calls, deg = agg[(method, i)]
            lo, hi = analytics.clopper_pearson(succ, config.trials, config.alpha)
            out.rows.append(SweepRow(
                method, spec.n, spec.N, spec.M, snr, config.trials, succ,
                succ / config.trials, lo, hi,
                float(_THEORY[method](spec.N, spec.M, snr)), calls, deg,
            ))
    if config.out_path:
        out.to_csv(config.out_path)
    return out


def run_fig1(config: ExperimentConfig | None = None) -> SweepResult:
    """N = 16, M = 3, 1000 trials per point unless the config says otherwise."""
    return run_sweep(config or ExperimentConfig())


# --- analytic ratio table ------------------------------------------------

FIG2_HEADER = ("n", "N", "M", "snr", "R", "p_g", "p_s", "P_s", "ratio", "degenerate")


@dataclass(frozen=True)
class Fig2Row:
    n: int
    N: int
    M: int
    snr: float
    R: int
    p_g: float
    p_s: float
    P_s: float
    ratio: float
    degenerate: bool


@dataclass
class Fig2Result(_CsvMixin):
    rows: list[Fig2Row] = field(default_factory=list)
    header = FIG2_HEADER

    def max_ratio(self) -> float:
        return max(r.ratio for r in self.rows)


def run_fig2(max_n: int = 4, snr_grid: Sequence[float] | None = None, out_path: str | None = None) -> Fig2Result:
    """p_G / P_S with P_S the subspace method repeated R + 1 times; no sampling."""
    snrs = np.asarray(snr_grid if snr_grid is not None else np.logspace(-2, 4, 200), dtype=float)
    out = Fig2Result()
    for n in range(1, max_n + 1):
        N = 1 << n
        for M in range(N + 1):
            plan = grover_plan(N, M)
            pg = np.atleast_1d(analytics.p_grover(N, M, snrs, plan))
            ps = np.atleast_1d(analytics.p_subspace(N, M, snrs))
            Ps = np.atleast_1d(repeated_success_probability(ps, plan.R + 1))
            for snr, g, p, P in zip(snrs, pg, ps, Ps):
                degenerate = P == 0
                ratio = 1.0 if degenerate else g / P
                out.rows.append(Fig2Row(n, N, M, float(snr), plan.R, float(g), float(p), float(P), float(ratio), bool(degenerate)))
    if out_path:
        out.to_csv(out_path)
    return out


# --- solution-count distribution -----------------------------------------

COUNT_HEADER = ("snr", "m", "count", "p_hat", "p_theory")
COUNT_SUMMARY_HEADER = ("snr", "trials", "tv_distance", "mean_abs", "mean_theory", "mean_stderr", "var_abs", "var_theory", "var_stderr")


@dataclass(frozen=True)
class CountRow:
    snr: float
    m: int
    count: int
    p_hat: float
    p_theory: float


@dataclass(frozen=True)
class CountSummary:
    snr: float
    trials: int
    tv_distance: float
    mean_abs: float
    mean_theory: float
    mean_stderr: float
    var_abs: float
    var_theory: float
    var_stderr: float


@dataclass
class CountResult(_CsvMixin):
    rows: list[CountRow] = field(default_factory=list)
    summaries: list[CountSummary] = field(default_factory=list)
    header = COUNT_HEADER

    def summary_csv(self) -> str:
        buf = io.StringIO()
        write_csv(self.summaries, COUNT_SUMMARY_HEADER, buf)
        return buf.getvalue()


def _count_draws(args) -> np.ndarray:
    spec, params, base_seed, snr_index, start, stop = args
    out = np.empty(stop - start, dtype=np.complex128)
    for t in range(start, stop):
        rng = np.random.default_rng((base_seed, _TAG_COUNT, snr_index, t))
        out[t - start] = estimate_solution_count(spec, params, rng)[0]
    return out


def run_count_experiment(config: ExperimentConfig) -> CountResult:
    spec = resolve_spec(config)
    N, M, s, T = spec.N, spec.M, config.s, config.T
    result = CountResult()
    for i, snr in enumerate(snr_values(config)):
        params = NoiseParams.from_snr(snr, s, T)
        tasks = [(spec, params, config.base_seed, i, a, b) for a, b in _chunks(config.trials, config.workers)]
        if config.workers == 1:
            parts = list(map(_count_draws, tasks))
        else:
            with ProcessPoolExecutor(config.workers) as pool:
                parts = list(pool.map(_count_draws, tasks))
        raw = np.abs(np.concatenate(parts))
        m_hat = np.floor(raw + 0.5).astype(int)
        counts = np.bincount(m_hat)
        top = max(len(counts) - 1, M)
        # extend the support until the closed-form tail is negligible
        while analytics.count_estimate_pmf(top + 1, N, M, s, params.sigma2, T) > 1e-12:
            top += 1
        tv = 0.0
        for m in range(top + 1):
            c = int(counts[m]) if m < len(counts) else 0
            p = analytics.count_estimate_pmf(m, N, M, s, params.sigma2, T)
            result.rows.append(CountRow(snr, m, c, c / config.trials, p))
            tv += abs(c / config.trials - p)
        mean_t, var_t = analytics.rician_mean_var(N, M, s, params.sigma2, T)
        k = len(raw)
        if k > 1:
            stderr = float(raw.std(ddof=1) / math.sqrt(k))
            var = float(raw.var(ddof=1))
            # large-sample stderr of the sample variance: sqrt((m4 - m2^2) / k)
            m4 = float(np.mean((raw - raw.mean()) ** 4))
            var_se = math.sqrt(max(m4 - raw.var() ** 2, 0.0) / k)
        else:
            stderr = var = var_se = math.nan
        result.summaries.append(CountSummary(snr, k, 0.5 * tv, float(raw.mean()), mean_t, stderr, var, var_t, var_se))
    if config.out_path:
        result.to_csv(config.out_path)
    return result


# --- cross-engine validation ---------------------------------------------

@dataclass(frozen=True)
class ValidationCase:
    name: str
    discrepancy: float


@dataclass
class ValidationReport:
    cases: list[ValidationCase] = field(default_factory=list)
    tolerance: float = 1e-9

    @property
    def max_discrepancy(self) -> float:
        return max(c.discrepancy for c in self.cases)

    @property
    def passed(self) -> bool:
        return self.max_discrepancy < self.tolerance

    def lines(self) -> list[str]:
        out = [f"{c.name}: {c.discrepancy:.3e}" for c in self.cases]
        verdict = "PASS" if self.passed else "FAIL"
        out.append(f"{verdict} max discrepancy {self.max_discrepancy:.3e} (tolerance {self.tolerance:.0e})")
        return out


def _signal_uniform(n: int) -> SampledWaveform:
    wave = synthesize(init_state(n))
    for k in range(1, n + 1):
        wave = signal_hadamard(wave, k)
    return wave


def _validation_corpus(max_n: int, rng: np.random.Generator):
    """(name, amplitude-engine state, signal-engine waveform) triples.

    Pipeline cases build the waveform with signal-domain gates so the two
    engines are compared end to end, not just through a synthesis round trip.
    """
    corpus = []
    for n in range(1, max_n + 1):
        N = 1 << n
        psi0 = hadamard_layer(init_state(n))
        wave0 = _signal_uniform(n)
        corpus.append((f"n={n} init", init_state(n), synthesize(init_state(n))))
        corpus.append((f"n={n} H1", hadamard(init_state(n), 1), signal_hadamard(synthesize(init_state(n)), 1)))
        corpus.append((f"n={n} uniform", psi0, wave0))
        solution_sets = {(), (N - 1,), (0,), tuple(range(N))}
        for M in range(1, N + 1, max(1, N // 4)):
            solution_sets.add(tuple(int(a) for a in rng.choice(N, size=M, replace=False)))
        for sols in sorted(solution_sets):
            spec = OracleSpec(n, sols)
            wave = signal_oracle(wave0, sols)
            corpus.append((f"n={n} oracle S={list(sols)}", apply_oracle(psi0, spec), wave))
            corpus.append((
                f"n={n} projected S={list(sols)}",
                project_output_one(apply_oracle(psi0, spec)),
                signal_project_output_one(wave),
            ))
        amps = rng.standard_normal(2 * N) + 1j * rng.standard_normal(2 * N)
        rand = StateVector(n, amps)
        corpus.append((f"n={n} random", rand, synthesize(rand)))
    return corpus


def run_validate_signal(
    config: ExperimentConfig | None = None,
    perturb: Callable[[SampledWaveform], SampledWaveform] | None = None,
    tolerance: float = 1e-9,
) -> ValidationReport:
    """Run the noiseless corpus through both engines and compare amplitudes.

    ``perturb`` corrupts each signal-engine waveform before comparison; it
    exists so the detector itself can be tested.
    """
    config = config or ExperimentConfig()
    if config.n > 4:
        raise ValueError("signal validation is limited to n <= 4")
    rng = np.random.default_rng([config.base_seed, _TAG_PLACEMENT, 1])
    report = ValidationReport(tolerance=tolerance)
    for name, psi, wave in _validation_corpus(config.n, rng):
        if perturb is not None:
            wave = perturb(wave)
        back = demodulate(wave)
        d_amp = float(np.max(np.abs(back.amps - psi.amps)))
        d_norm = abs(signal_inner_product(wave, wave) - inner_product(psi, psi))
        proj = demodulate(signal_project_output_one(wave))
        d_proj = float(np.max(np.abs(proj.amps - project_output_one(psi).amps)))
        report.cases.append(ValidationCase(name, max(d_amp, d_norm, d_proj)))
    return report


# --- extraction ----------------------------------------------------------

EXTRACT_HEADER = ("trial", "found", "exact")


@dataclass(frozen=True)
class ExtractRow:
    trial: int
    found: str
    exact: bool


@dataclass
class ExtractResult(_CsvMixin):
    rows: list[ExtractRow] = field(default_factory=list)
    header = EXTRACT_HEADER

    def exact_rate(self) -> float:
        return sum(r.exact for r in self.rows) / len(self.rows)


def run_extract(config: ExperimentConfig, snr: float | None = None, max_iters: int = 64) -> ExtractResult:
    spec = resolve_spec(config)
    snr = snr if snr is not None else snr_values(config)[0]
    params = NoiseParams.from_snr(snr, config.s, config.T)
    target = set(spec.solutions)
    out = ExtractResult()
    for t in range(config.trials):
        rng = np.random.default_rng((config.base_seed, _TAG_EXTRACT, t))
        found = extract_all_solutions(spec, params, rng, max_iters)
        out.rows.append(ExtractRow(t, " ".join(map(str, found)), set(found) == target and len(found) == len(target)))
    if config.out_path:
        out.to_csv(config.out_path)
    return out
