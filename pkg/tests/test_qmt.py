import io
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qmtsearch.gates import OracleSpec, apply_oracle, hadamard_layer
from qmtsearch.qmt import (
    DimensionMismatch,
    FrequencyMap,
    StateVector,
    basis_state,
    component_frequency,
    dump_state,
    init_state,
    inner_product,
    load_state,
    norm_sq,
    subtract,
    zero_state,
)
from qmtsearch.search import project_output_one

from conftest import random_state, states


class TestInitState:
    def test_n1(self):
        np.testing.assert_array_equal(init_state(1, 1.0).amps, [1, 0, 0, 0])

    def test_n2_norm(self):
        assert norm_sq(init_state(2, 1.0)) == 1.0

    def test_n4_s2(self):
        psi = init_state(4, 2.0)
        assert psi.amp(0, 0) == 2
        assert np.count_nonzero(psi.amps) == 1
        assert len(psi.amps) == 32
        assert norm_sq(psi) == 4.0

    @pytest.mark.parametrize("n,s", [(0, 1.0), (2, 0.0), (2, -1.0)])
    def test_invalid(self, n, s):
        with pytest.raises(ValueError):
            init_state(n, s)


def test_state_rejects_wrong_length_and_nan():
    with pytest.raises(ValueError):
        StateVector(2, np.zeros(5))
    bad = np.zeros(8, complex)
    bad[3] = np.nan
    with pytest.raises(ValueError):
        StateVector(2, bad)


def test_state_is_immutable():
    psi = init_state(2)
    with pytest.raises(ValueError):
        psi.amps[0] = 3


def test_state_does_not_freeze_caller_array():
    a = np.zeros(8, complex)
    StateVector(2, a)
    a[0] = 1  # still writeable


class TestFrequencies:
    def test_examples(self):
        assert component_frequency(0, 0, 2, 1.0) == 3
        assert component_frequency(1, 1, 2, 1.0) == -3

    def test_n8_distinct(self):
        freqs = {component_frequency(x, y, 8) for x in range(8) for y in (0, 1)}
        assert len(freqs) == 16

    @pytest.mark.parametrize("n", range(1, 11))
    def test_injective_odd_multiples(self, n):
        N = 1 << n
        table = FrequencyMap(N).table
        assert len(np.unique(table)) == 2 * N
        assert np.all(table.astype(int) % 2 == 1)

    def test_table_matches_per_component(self):
        fm = FrequencyMap(8, omega0=0.5)
        for x in range(8):
            for y in (0, 1):
                assert fm.table[2 * x + y] == fm(x, y) == (15 - 4 * x - 2 * y) * 0.5

    def test_sum_of_qubit_tones(self):
        # |0>_k -> +omega_k, |1>_k -> -omega_k, summed over all n+1 qubits
        n = 3
        fm = FrequencyMap(1 << n)
        for j in range(2 << n):
            expect = sum((1 - 2 * ((j >> k) & 1)) * fm.qubit_frequency(k) for k in range(n + 1))
            assert fm.table[j] == expect

    @pytest.mark.parametrize("x,y", [(-1, 0), (4, 0), (0, 2)])
    def test_out_of_range(self, x, y):
        with pytest.raises(ValueError):
            component_frequency(x, y, 4)


class TestInnerProduct:
    def test_self(self):
        assert inner_product(init_state(2), init_state(2)) == 1

    def test_disjoint_supports(self):
        assert inner_product(basis_state(2, 1, 0), basis_state(2, 3, 1)) == 0

    def test_mismatch(self):
        with pytest.raises(DimensionMismatch):
            inner_product(init_state(2), init_state(3))

    @given(states(), st.integers(0, 2**32 - 1))
    def test_sesquilinear(self, psi, seed):
        rng = np.random.default_rng(seed)
        phi, chi = random_state(psi.n, rng), random_state(psi.n, rng)
        a, b = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
        lin = StateVector(psi.n, a * phi.amps + b * chi.amps)
        lhs = inner_product(psi, lin)
        assert abs(lhs - (a * inner_product(psi, phi) + b * inner_product(psi, chi))) < 1e-10
        anti = inner_product(lin, psi)
        expect = a.conjugate() * inner_product(phi, psi) + b.conjugate() * inner_product(chi, psi)
        assert abs(anti - expect) < 1e-10

    @given(states())
    def test_norm_is_self_product(self, psi):
        assert norm_sq(psi) == inner_product(psi, psi).real
        assert inner_product(psi, psi).imag == 0

    @given(states())
    def test_basis_extraction(self, psi):
        for x in range(psi.N):
            for y in (0, 1):
                assert inner_product(basis_state(psi.n, x, y), psi) == psi.amp(x, y)


def test_norm_examples():
    assert norm_sq(init_state(3)) == 1
    assert norm_sq(zero_state(3)) == 0
    assert abs(norm_sq(hadamard_layer(init_state(4, 1.5))) - 2.25) < 1e-12


class TestSubtract:
    def test_self(self, rng):
        psi = random_state(3, rng)
        assert norm_sq(subtract(psi, psi)) == 0

    def test_two_solutions(self):
        n, s = 3, 1.0
        N = 1 << n
        proj = project_output_one(apply_oracle(hadamard_layer(init_state(n, s)), OracleSpec(n, (2, 5))))
        rest = subtract(proj, basis_state(n, 2, 1, s / math.sqrt(N), s))
        assert np.flatnonzero(np.abs(rest.amps) > 1e-15).tolist() == [2 * 5 + 1]

    def test_all_solutions_removed(self):
        n, s = 4, 1.0
        sols = (2, 7, 11, 13)
        psi = project_output_one(apply_oracle(hadamard_layer(init_state(n, s)), OracleSpec(n, sols)))
        for a in sols:
            psi = subtract(psi, basis_state(n, a, 1, s / 4, s))
        assert norm_sq(psi) < 1e-24

    def test_mismatch(self):
        with pytest.raises(DimensionMismatch):
            subtract(init_state(1), init_state(2))


def test_dump_roundtrip(rng):
    psi = random_state(2, rng)
    buf = io.StringIO()
    dump_state(psi, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "n=2 s=1.0"
    assert lines[1].startswith("0,0,")
    assert len(lines) == 1 + 8
    buf.seek(0)
    np.testing.assert_array_equal(load_state(buf).amps, psi.amps)
