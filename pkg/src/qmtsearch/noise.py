"""Additive complex Gaussian noise on oracle calls, and the SNR/fidelity calculus."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gates import OracleSpec, _oracle
from .qmt import StateVector

__all__ = [
    "NoiseParams",
    "UnreachableFidelity",
    "sample_noise_amplitudes",
    "sample_noise_state",
    "noisy_oracle",
    "fidelity",
    "fidelity_from_snr",
    "sigma2_for_fidelity",
]

TWO_PI = 2.0 * math.pi


class UnreachableFidelity(ValueError):
    """Requested fidelity is at or below the 1/sqrt(2N) floor."""


@dataclass(frozen=True)
class NoiseParams:
    s: float = 1.0
    T: float = TWO_PI
    sigma2: float = 0.0

    def __post_init__(self):
        if not self.s > 0:
            raise ValueError(f"s must be positive, got {self.s}")
        if not self.T > 0:
            raise ValueError(f"T must be positive, got {self.T}")
        if not self.sigma2 >= 0:
            raise ValueError(f"sigma2 must be >= 0, got {self.sigma2}")

    @classmethod
    def from_snr(cls, snr: float, s: float = 1.0, T: float = TWO_PI) -> "NoiseParams":
        if not snr > 0:
            raise ValueError(f"SNR must be positive, got {snr}")
        return cls(s, T, 0.0 if math.isinf(snr) else s * s * T / snr)

    @property
    def snr(self) -> float:
        """S^2 = s^2 T / sigma^2; inf for a noiseless oracle."""
        if self.sigma2 == 0:
            return math.inf
        return self.s * self.s * self.T / self.sigma2

    @property
    def component_variance(self) -> float:
        return self.sigma2 / self.T


def sample_noise_amplitudes(n: int, params: NoiseParams, rng: np.random.Generator, size=None) -> np.ndarray:
    """Raw noise amplitudes, shape ``(*size, 2N)``.

    Each entry is circular complex Gaussian with E|z|^2 = sigma^2 / T.
    """
    shape = (2 << n,) if size is None else (*np.atleast_1d(size), 2 << n)
    if params.sigma2 == 0:
        return np.zeros(shape, dtype=np.complex128)
    scale = math.sqrt(params.component_variance / 2.0)
    z = rng.standard_normal((*shape, 2))
    return scale * (z[..., 0] + 1j * z[..., 1])


def sample_noise_state(n: int, params: NoiseParams, rng: np.random.Generator) -> StateVector:
    return StateVector(n, sample_noise_amplitudes(n, params, rng), params.s)


def noisy_oracle(psi: StateVector, spec: OracleSpec, params: NoiseParams, rng: np.random.Generator) -> StateVector:
    amps = _oracle(psi.amps, spec.solutions, psi.n)
    if params.sigma2 > 0:
        amps = amps + sample_noise_amplitudes(psi.n, params, rng)
    return psi.replace(amps)


def fidelity_from_snr(N: int, snr: float) -> float:
    if math.isinf(snr):
        return 1.0
    return math.sqrt((1.0 + 1.0 / snr) / (1.0 + 2.0 * N / snr))


def fidelity(N: int, params: NoiseParams) -> float:
    s2, v = params.s ** 2, params.component_variance
    return math.sqrt((s2 + v) / (s2 + 2 * N * v))


def sigma2_for_fidelity(N: int, s: float, T: float, F: float) -> float:
    if F > 1:
        raise ValueError(f"fidelity must be <= 1, got {F}")
    F2 = F * F
    if 2 * N * F2 <= 1:
        raise UnreachableFidelity(f"F={F} <= 1/sqrt(2N)={1 / math.sqrt(2 * N):.6g} cannot be reached for N={N}")
    return s * s * T * (1.0 - F2) / (2 * N * F2 - 1.0)
