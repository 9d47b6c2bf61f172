import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ampsynth import statevec
from ampsynth.errors import ArgumentError, ResourceError
from ampsynth.statevec import (
    StateVector,
    basis_state,
    inner_product,
    probability_mass,
    random_state,
    split_ancilla,
)

PLUS = StateVector(1, np.array([1, 1]) / np.sqrt(2))


@pytest.mark.parametrize(
    "m, i, expected",
    [(1, 0, [1, 0]), (2, 3, [0, 0, 0, 1]), (0, 0, [1])],
)
def test_basis_state(m, i, expected):
    assert np.array_equal(basis_state(m, i).amps, np.array(expected, dtype=complex))


@pytest.mark.parametrize("m, i", [(1, 2), (2, -1), (0, 1)])
def test_basis_state_out_of_range(m, i):
    with pytest.raises(ArgumentError):
        basis_state(m, i)


def test_width_cap(monkeypatch):
    monkeypatch.setattr(statevec, "MAX_QUBITS", 3)
    with pytest.raises(ResourceError):
        basis_state(4, 0)


def test_amps_are_read_only():
    s = basis_state(1, 0)
    with pytest.raises(ValueError):
        s.amps[0] = 2


def test_wrong_length_rejected():
    with pytest.raises(ArgumentError):
        StateVector(2, np.ones(3))


def test_inner_product_examples():
    assert inner_product(basis_state(1, 0), basis_state(1, 0)) == 1
    assert inner_product(basis_state(1, 0), basis_state(1, 1)) == 0
    # hand summation: conj(1) * 1/sqrt2 + conj(0) * 1/sqrt2
    assert inner_product(basis_state(1, 0), PLUS) == pytest.approx(0.7071067811865476, abs=1e-15)


def test_inner_product_width_mismatch():
    with pytest.raises(ArgumentError):
        inner_product(basis_state(1, 0), basis_state(2, 0))


def test_probability_mass_examples():
    assert probability_mass(basis_state(1, 0), {0}) == 1
    assert probability_mass(PLUS, {1}) == pytest.approx(0.5, abs=1e-15)
    assert probability_mass(PLUS, set()) == 0
    assert probability_mass(PLUS, range(0, 2)) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ArgumentError):
        probability_mass(PLUS, {2})


def test_split_ancilla_examples():
    zero, one = split_ancilla(basis_state(2, 1))
    assert np.array_equal(zero, [0, 1]) and np.array_equal(one, [0, 0])
    zero, one = split_ancilla(basis_state(2, 2))
    assert np.array_equal(zero, [0, 0]) and np.array_equal(one, [1, 0])
    uniform = StateVector(2, np.full(4, 0.5))
    zero, one = split_ancilla(uniform)
    assert np.vdot(zero, zero).real == pytest.approx(0.5)
    assert np.vdot(one, one).real == pytest.approx(0.5)
    with pytest.raises(ArgumentError):
        split_ancilla(basis_state(0, 0))


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), m=st.integers(0, 6))
def test_invariants(seed, m):
    rng = np.random.default_rng(seed)
    a, b = random_state(m, rng), random_state(m, rng)
    assert abs(a.norm_sq() - 1) <= 1e-12
    assert abs(inner_product(a, b) - np.conj(inner_product(b, a))) <= 1e-14
    assert abs(probability_mass(a, range(a.dim)) - a.norm_sq()) <= 1e-12
    assert abs(probability_mass(a, np.arange(a.dim)) - a.norm_sq()) <= 1e-12
    if m >= 1:
        zero, one = split_ancilla(a)
        assert np.array_equal(np.concatenate([zero, one]), a.amps)
        assert abs(np.vdot(zero, zero).real + np.vdot(one, one).real - 1) <= 1e-10
