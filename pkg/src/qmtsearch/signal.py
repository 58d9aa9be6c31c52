"""Time-domain QMT engine used to cross-check the amplitude engine.

A state is synthesized as psi(t) = sum alpha[x, y] exp(i Omega[x, y] t)
over one fundamental period T = 2 pi / omega0. The tones are odd
harmonics of omega0 in [-(2N-1), 2N-1], so sampling a single period at
more than 2(2N-1) points makes them exactly orthogonal under the discrete
inner product.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import TextIO

import numpy as np

from .qmt import FrequencyMap, StateVector

__all__ = [
    "SampledWaveform",
    "default_sample_rate",
    "synthesize",
    "signal_inner_product",
    "demodulate",
    "signal_project_output_one",
    "signal_hadamard",
    "signal_x",
    "signal_toffoli",
    "signal_oracle",
    "dump_waveform",
]


@dataclass(frozen=True, eq=False)
class SampledWaveform:
    samples: np.ndarray
    sample_rate: int
    n: int
    omega0: float = 1.0
    s: float = 1.0

    def __post_init__(self):
        N = 1 << self.n
        if self.sample_rate <= 2 * (2 * N - 1):
            raise ValueError(f"sample_rate {self.sample_rate} does not oversample the top tone {2 * N - 1}")
        samples = np.array(self.samples, dtype=np.complex128)
        if samples.shape != (self.sample_rate,):
            raise ValueError(f"expected one period of {self.sample_rate} samples, got {samples.shape}")
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)

    @property
    def period(self) -> float:
        return 2 * math.pi / self.omega0

    def times(self) -> np.ndarray:
        return np.arange(self.sample_rate) * (self.period / self.sample_rate)


def default_sample_rate(n: int) -> int:
    return 8 << n


@lru_cache(maxsize=32)
def _tone_matrix(n: int, sample_rate: int) -> np.ndarray:
    # rows: samples, columns: basis tones in flat (x, y) order
    harmonics = FrequencyMap(1 << n).harmonics()
    j = np.arange(sample_rate)
    phase = np.outer(j, harmonics) % sample_rate
    m = np.exp(2j * np.pi * phase / sample_rate)
    m.flags.writeable = False
    return m


def synthesize(psi: StateVector, sample_rate: int | None = None, omega0: float = 1.0) -> SampledWaveform:
    if sample_rate is None:
        sample_rate = default_sample_rate(psi.n)
    if sample_rate <= 2 * (2 * psi.N - 1):
        raise ValueError(f"sample_rate {sample_rate} undersamples n={psi.n}; need > {2 * (2 * psi.N - 1)}")
    return SampledWaveform(_tone_matrix(psi.n, sample_rate) @ psi.amps, sample_rate, psi.n, omega0, psi.s)


def _check_pair(phi: SampledWaveform, psi: SampledWaveform):
    if phi.sample_rate != psi.sample_rate or phi.n != psi.n:
        raise ValueError(
            f"waveforms differ: (n={phi.n}, rate={phi.sample_rate}) vs (n={psi.n}, rate={psi.sample_rate})"
        )


def signal_inner_product(phi: SampledWaveform, psi: SampledWaveform) -> complex:
    """Riemann sum of (1/T) * integral of conj(phi) psi over one period."""
    _check_pair(phi, psi)
    return complex(np.vdot(phi.samples, psi.samples) / phi.sample_rate)


def demodulate(wave: SampledWaveform) -> StateVector:
    """Recover every alpha[x, y] as the inner product with its unit tone."""
    tones = _tone_matrix(wave.n, wave.sample_rate)
    return StateVector(wave.n, tones.conj().T @ wave.samples / wave.sample_rate, wave.s)


def signal_project_output_one(wave: SampledWaveform) -> SampledWaveform:
    """Ideal band-pass onto the y = 1 tones."""
    psi = demodulate(wave)
    amps = psi.amps.copy()
    amps[0::2] = 0
    return synthesize(psi.replace(amps), wave.sample_rate, wave.omega0)


def _bandpass(wave: SampledWaveform, keep: np.ndarray) -> np.ndarray:
    """Ideal filter bank: keep only the tones flagged in ``keep`` (flat order)."""
    tones = _tone_matrix(wave.n, wave.sample_rate)
    coeffs = tones.conj().T @ wave.samples / wave.sample_rate
    return tones @ np.where(keep, coeffs, 0)


def _split(wave: SampledWaveform, k: int) -> tuple[np.ndarray, np.ndarray]:
    bit = (np.arange(2 << wave.n) >> k) & 1
    return _bandpass(wave, bit == 0), _bandpass(wave, bit == 1)


def _oscillator(wave: SampledWaveform, k: int) -> np.ndarray:
    # exp(-2i omega_k t) moves a qubit-k |0> tone onto its |1> partner
    j = np.arange(wave.sample_rate)
    return np.exp(-2j * np.pi * ((2 << k) * j % wave.sample_rate) / wave.sample_rate)


def _check_k(wave: SampledWaveform, k: int):
    if not 0 <= k <= wave.n:
        raise IndexError(f"qubit index {k} out of range [0, {wave.n}]")


def _like(wave: SampledWaveform, samples: np.ndarray) -> SampledWaveform:
    return SampledWaveform(samples, wave.sample_rate, wave.n, wave.omega0, wave.s)


def signal_x(wave: SampledWaveform, k: int) -> SampledWaveform:
    """NOT on qubit k: split by qubit-k sub-band, then mix each half onto the other."""
    _check_k(wave, k)
    lo, hi = _split(wave, k)
    osc = _oscillator(wave, k)
    return _like(wave, lo * osc + hi * osc.conj())


def signal_hadamard(wave: SampledWaveform, k: int) -> SampledWaveform:
    _check_k(wave, k)
    lo, hi = _split(wave, k)
    osc = _oscillator(wave, k)
    r = 1.0 / math.sqrt(2.0)
    return _like(wave, r * (lo + hi * osc.conj()) + r * (lo * osc - hi))


def signal_toffoli(wave: SampledWaveform) -> SampledWaveform:
    """Narrowband-filter the two top-x tones and swap their coefficients."""
    tones = _tone_matrix(wave.n, wave.sample_rate)
    t0, t1 = tones[:, -2], tones[:, -1]
    c0 = np.vdot(t0, wave.samples) / wave.sample_rate
    c1 = np.vdot(t1, wave.samples) / wave.sample_rate
    return _like(wave, wave.samples + (c1 - c0) * t0 + (c0 - c1) * t1)


def signal_oracle(wave: SampledWaveform, solutions) -> SampledWaveform:
    """Planted-solution oracle built from signal-level X and Toffoli operations."""
    for a in solutions:
        flips = [i + 1 for i in range(wave.n) if not (a >> i) & 1]
        for k in flips:
            wave = signal_x(wave, k)
        wave = signal_toffoli(wave)
        for k in flips:
            wave = signal_x(wave, k)
    return wave


def dump_waveform(wave: SampledWaveform, fh: TextIO):
    for t, v in zip(wave.times(), wave.samples):
        fh.write(f"{float(t)!r},{float(v.real)!r},{float(v.imag)!r}\n")
