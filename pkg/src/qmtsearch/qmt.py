"""Amplitude-level representation of (n+1)-qubit QMT states.

A state holds 2N complex amplitudes alpha[x, y] for input value x in
[0, N) and output bit y in {0, 1}, stored flat with index 2*x + y. With
that ordering, bit k of the flat index is qubit k: qubit 0 is the output
register, qubits 1..n are the input bits of x (little-endian).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, TextIO

import numpy as np

__all__ = [
    "DimensionMismatch",
    "StateVector",
    "FrequencyMap",
    "init_state",
    "zero_state",
    "basis_state",
    "component_frequency",
    "inner_product",
    "norm_sq",
    "subtract",
    "dump_state",
    "load_state",
]


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class StateVector:
    n: int
    amps: np.ndarray
    s: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one input qubit, got n={self.n}")
        amps = np.array(self.amps, dtype=np.complex128)
        if amps.shape != (2 << self.n,):
            raise ValueError(f"expected {2 << self.n} amplitudes for n={self.n}, got shape {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)

    @property
    def N(self) -> int:
        return 1 << self.n

    def amp(self, x: int, y: int) -> complex:
        return complex(self.amps[2 * x + y])

    def grid(self) -> np.ndarray:
        """Amplitudes as an (N, 2) array indexed [x, y]."""
        return self.amps.reshape(self.N, 2)

    def replace(self, amps: np.ndarray) -> "StateVector":
        return StateVector(self.n, amps, self.s)

    def __iter__(self) -> Iterator[tuple[int, int, complex]]:
        for i, a in enumerate(self.amps):
            yield i >> 1, i & 1, complex(a)

    def __repr__(self):
        return f"StateVector(n={self.n}, s={self.s}, norm_sq={norm_sq(self):.6g})"


@dataclass(frozen=True)
class FrequencyMap:
    """Tone assignment Omega[x, y] = (2N - 1 - 4x - 2y) * omega0."""

    N: int
    omega0: float = 1.0
    table: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        idx = np.arange(2 * self.N)
        object.__setattr__(self, "table", (2 * self.N - 1 - 2 * idx) * self.omega0)

    def __call__(self, x: int, y: int) -> float:
        return component_frequency(x, y, self.N, self.omega0)

    def qubit_frequency(self, k: int) -> float:
        return (1 << k) * self.omega0

    def harmonics(self) -> np.ndarray:
        """Integer tone indices (odd, in [-(2N-1), 2N-1]) in flat storage order."""
        return 2 * self.N - 1 - 2 * np.arange(2 * self.N)


def _check_n_s(n: int, s: float):
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not s > 0:
        raise ValueError(f"s must be positive, got {s}")


def init_state(n: int, s: float = 1.0) -> StateVector:
    _check_n_s(n, s)
    amps = np.zeros(2 << n, dtype=np.complex128)
    amps[0] = s
    return StateVector(n, amps, s)


def zero_state(n: int, s: float = 1.0) -> StateVector:
    _check_n_s(n, s)
    return StateVector(n, np.zeros(2 << n, dtype=np.complex128), s)


def basis_state(n: int, x: int, y: int, amplitude: complex = 1.0, s: float = 1.0) -> StateVector:
    N = 1 << n
    if not 0 <= x < N or y not in (0, 1):
        raise ValueError(f"basis label ({x}, {y}) out of range for n={n}")
    amps = np.zeros(2 * N, dtype=np.complex128)
    amps[2 * x + y] = amplitude
    return StateVector(n, amps, s)


def component_frequency(x: int, y: int, N: int, omega0: float = 1.0) -> float:
    if not 0 <= x < N:
        raise ValueError(f"x={x} out of range [0, {N})")
    if y not in (0, 1):
        raise ValueError(f"y must be 0 or 1, got {y}")
    return (2 * N - 1 - 4 * x - 2 * y) * omega0


def _same_shape(phi: StateVector, psi: StateVector):
    if phi.n != psi.n:
        raise DimensionMismatch(f"states have different qubit counts ({phi.n} vs {psi.n})")


def inner_product(phi: StateVector, psi: StateVector) -> complex:
    _same_shape(phi, psi)
    return complex(np.vdot(phi.amps, psi.amps))


def norm_sq(psi: StateVector) -> float:
    return float(np.vdot(psi.amps, psi.amps).real)


def subtract(psi: StateVector, phi: StateVector) -> StateVector:
    _same_shape(psi, phi)
    return psi.replace(psi.amps - phi.amps)


def dump_state(psi: StateVector, fh: TextIO):
    fh.write(f"n={psi.n} s={float(psi.s)!r}\n")
    for x, y, a in psi:
        fh.write(f"{x},{y},{float(a.real)!r},{float(a.imag)!r}\n")


def load_state(fh: TextIO) -> StateVector:
    header = dict(tok.split("=") for tok in fh.readline().split())
    n, s = int(header["n"]), float(header["s"])
    amps = np.zeros(2 << n, dtype=np.complex128)
    for line in fh:
        if not line.strip():
            continue
        x, y, re, im = line.split(",")
        amps[2 * int(x) + int(y)] = complex(float(re), float(im))
    return StateVector(n, amps, s)
