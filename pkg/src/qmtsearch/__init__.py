"""Signal-based quantum emulation of search with noisy oracles.

Two engines share one state model: an amplitude engine (``qmt``, ``gates``,
``noise``, ``search``) for fast Monte Carlo, and a time-domain engine
(``signal``) that cross-checks it. ``analytics`` holds the closed forms and
``harness`` the experiment drivers behind the ``qmtsearch`` CLI.
"""
from .analytics import (
    clopper_pearson,
    count_estimate_pmf,
    crossover_snr,
    laguerre_half,
    marcum_q1,
    method_curve_point,
    p_brute,
    p_grover,
    p_subspace,
    rician_mean_var,
)
from .gates import OracleSpec, GroverPlan, apply_oracle, diffusion, grover_plan, hadamard, x_gate
from .noise import NoiseParams, fidelity, noisy_oracle, sample_noise_state, sigma2_for_fidelity
from .qmt import StateVector, init_state, inner_product, norm_sq, subtract
from .search import (
    TrialRecord,
    brute_force_trial,
    estimate_solution_count,
    extract_all_solutions,
    grover_trial,
    measure_full,
    project_output_one,
    repeated_success_probability,
    subspace_trial,
)

__version__ = "0.1.0"
