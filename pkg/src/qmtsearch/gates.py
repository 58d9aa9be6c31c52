"""Unitary gates and planted-solution oracles on QMT states.

Qubit 0 is the output register; qubits 1..n carry the bits of x. Gates
work on the flat amplitude array by viewing it as (high, 2, 2**k) so that
the middle axis is the bit of qubit k.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .qmt import StateVector

__all__ = [
    "OracleSpec",
    "GroverPlan",
    "hadamard",
    "hadamard_layer",
    "x_gate",
    "n_fold_toffoli",
    "apply_A",
    "apply_oracle",
    "diffusion",
    "grover_plan",
    "grover_circuit",
]

_SQRT_HALF = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class OracleSpec:
    n: int
    solutions: tuple[int, ...] = ()

    def __post_init__(self):
        sols = tuple(int(a) for a in self.solutions)
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if len(set(sols)) != len(sols):
            raise ValueError(f"solutions must be distinct: {sols}")
        bad = [a for a in sols if not 0 <= a < self.N]
        if bad:
            raise ValueError(f"solutions out of range [0, {self.N}): {bad}")
        object.__setattr__(self, "solutions", sols)

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def M(self) -> int:
        return len(self.solutions)

    def f(self, x: int) -> int:
        return int(x in self.solutions)

    def indicator(self) -> np.ndarray:
        out = np.zeros(self.N, dtype=bool)
        out[list(self.solutions)] = True
        return out

    def complement(self) -> "OracleSpec":
        """Oracle for 1 - f."""
        mask = self.indicator()
        return OracleSpec(self.n, tuple(int(x) for x in np.flatnonzero(~mask)))

    @classmethod
    def random(cls, n: int, M: int, rng: np.random.Generator) -> "OracleSpec":
        N = 1 << n
        if not 0 <= M <= N:
            raise ValueError(f"M={M} out of range for N={N}")
        picks = rng.choice(N, size=M, replace=False)
        return cls(n, tuple(int(a) for a in picks))


@dataclass(frozen=True)
class GroverPlan:
    theta: float
    R: int
    complemented: bool = False


# array-level kernels; callers own the copy semantics

def _qubit_view(amps: np.ndarray, k: int) -> np.ndarray:
    return amps.reshape(-1, 2, 1 << k)


def _h(amps: np.ndarray, k: int) -> np.ndarray:
    v = _qubit_view(amps, k)
    out = np.empty_like(v)
    out[:, 0, :] = (v[:, 0, :] + v[:, 1, :]) * _SQRT_HALF
    out[:, 1, :] = (v[:, 0, :] - v[:, 1, :]) * _SQRT_HALF
    return out.reshape(-1)


def _x(amps: np.ndarray, k: int) -> np.ndarray:
    return _qubit_view(amps, k)[:, ::-1, :].reshape(-1)


def _toffoli(amps: np.ndarray) -> np.ndarray:
    out = amps.copy()
    out[-2], out[-1] = amps[-1], amps[-2]
    return out


def _A(amps: np.ndarray, a: int, n: int) -> np.ndarray:
    for i in range(n):
        if not (a >> i) & 1:
            amps = _x(amps, i + 1)
    return amps


def _oracle(amps: np.ndarray, solutions: Sequence[int], n: int) -> np.ndarray:
    for a in solutions:
        amps = _A(_toffoli(_A(amps, a, n)), a, n)
    return amps


def _check_qubit(psi: StateVector, k: int):
    if not 0 <= k <= psi.n:
        raise IndexError(f"qubit index {k} out of range [0, {psi.n}]")


def hadamard(psi: StateVector, k: int) -> StateVector:
    _check_qubit(psi, k)
    return psi.replace(_h(psi.amps, k))


def hadamard_layer(psi: StateVector) -> StateVector:
    """H_n ... H_1 on the input register."""
    amps = psi.amps
    for k in range(1, psi.n + 1):
        amps = _h(amps, k)
    return psi.replace(amps)


def x_gate(psi: StateVector, k: int) -> StateVector:
    _check_qubit(psi, k)
    return psi.replace(_x(psi.amps, k))


def n_fold_toffoli(psi: StateVector) -> StateVector:
    """Swap the (N-1, 0) and (N-1, 1) coefficients directly."""
    return psi.replace(_toffoli(psi.amps))


def apply_A(psi: StateVector, a: int) -> StateVector:
    """NOT on input qubit i+1 for every zero bit i of ``a``; maps |a> to |N-1>."""
    if not 0 <= a < psi.N:
        raise ValueError(f"a={a} out of range [0, {psi.N})")
    return psi.replace(_A(psi.amps, a, psi.n))


def apply_oracle(psi: StateVector, spec: OracleSpec) -> StateVector:
    """U_f as the product of A_j C A_j over the planted solutions."""
    if spec.n != psi.n:
        raise ValueError(f"oracle is for n={spec.n}, state has n={psi.n}")
    return psi.replace(_oracle(psi.amps, spec.solutions, psi.n))


def _diffuse(amps: np.ndarray, N: int) -> np.ndarray:
    g = amps.reshape(N, 2)
    return (2.0 * g.mean(axis=0) - g).reshape(-1)


def diffusion(psi: StateVector) -> StateVector:
    """Inversion about the mean of the input register, separately for each y."""
    return psi.replace(_diffuse(psi.amps, psi.N))


def grover_plan(N: int, M: int) -> GroverPlan:
    if not 0 <= M <= N:
        raise ValueError(f"M={M} out of range for N={N}")
    if M == 0:
        return GroverPlan(0.0, 0, False)
    theta = 2.0 * math.asin(math.sqrt(M / N))
    if 2 * M <= N:
        return GroverPlan(theta, math.floor(math.pi * math.sqrt(N / M) / 4), False)
    return GroverPlan(theta, math.floor(math.pi * math.sqrt((N - M) / M) / 4), True)


def grover_circuit(
    psi0: StateVector,
    R: int,
    oracle: Callable[[StateVector], StateVector],
) -> StateVector:
    """H_0 (W U)^R H_0 X_0 applied to a prepared state.

    ``oracle`` is called once per iteration so a noisy oracle draws fresh
    noise each time.
    """
    psi = hadamard(x_gate(psi0, 0), 0)
    for _ in range(R):
        psi = diffusion(oracle(psi))
    return hadamard(psi, 0)
