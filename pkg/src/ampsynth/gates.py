"""Primitive unitaries and invertible gate programs.

Every step works directly on the amplitude array by strided block updates;
no dense matrices are formed here (see :mod:`ampsynth.oracle` for those).
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, SpecError
from .statevec import NORM_TOL, StateVector, check_indices, check_width

INV_SQRT2 = 1.0 / np.sqrt(2.0)
F_BOUND_TOL = 1e-12
EXPLICIT_SET_LIMIT = 1 << 20
_PREDICATE_CHUNK = 1 << 20


def _check_qubit(m: int, q) -> int:
    if isinstance(q, (bool, np.bool_)) or not isinstance(q, (int, np.integer)):
        raise ArgumentError(f"qubit index must be an integer, got {q!r}")
    if not 0 <= q < m:
        raise ArgumentError(f"qubit {q} out of range for {m} qubits")
    return int(q)


def _m_inplace(amps: np.ndarray, q: int) -> None:
    v = amps.reshape(-1, 2, 1 << q)
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :]
    v[:, 0, :] = (a0 + a1) * INV_SQRT2
    v[:, 1, :] = (a0 - a1) * INV_SQRT2


def as_amplitude_table(f) -> np.ndarray:
    """Complex table behind ``f``, clamping magnitudes in (1, 1+1e-12] to 1.

    Accepts an :class:`~ampsynth.synth.AmplitudeSpec` or anything array-like.
    """
    values = np.asarray(getattr(f, "values", f), dtype=np.complex128).reshape(-1)
    mags = np.abs(values)
    if not np.all(np.isfinite(mags)):
        raise SpecError("amplitude table contains non-finite values")
    if mags.size and mags.max() > 1.0 + F_BOUND_TOL:
        worst = int(np.argmax(mags))
        raise SpecError(f"|f({worst})| = {mags[worst]!r} exceeds 1")
    over = mags > 1.0
    if over.any():
        values = values.copy()
        values[over] /= mags[over]
    return values


# -- gate steps ------------------------------------------------------------


@dataclass(frozen=True)
class M:
    """Single-qubit ``(1/sqrt2)[[1, 1], [1, -1]]`` on one qubit."""

    qubit: int

    def validate(self, m: int) -> None:
        _check_qubit(m, self.qubit)

    def apply_inplace(self, amps: np.ndarray, m: int) -> None:
        _m_inplace(amps, self.qubit)

    def inverse(self) -> M:
        return self


@dataclass(frozen=True)
class WH:
    """Walsh-Hadamard transform: ``M`` on each listed qubit."""

    qubits: tuple[int, ...]

    def __post_init__(self):
        qs = tuple(int(q) for q in self.qubits)
        if len(set(qs)) != len(qs):
            raise ArgumentError(f"duplicate qubit in {qs}")
        object.__setattr__(self, "qubits", qs)

    def validate(self, m: int) -> None:
        for q in self.qubits:
            _check_qubit(m, q)

    def apply_inplace(self, amps: np.ndarray, m: int) -> None:
        for q in self.qubits:
            _m_inplace(amps, q)

    def inverse(self) -> WH:
        return self


@dataclass(frozen=True, eq=False)
class PhaseFlip:
    """Negate the amplitudes of a marked set of basis states.

    ``marked`` is a sorted unique index array, a unit-step ``range`` (applied
    as a slice), or a vectorized predicate mapping an int64 index array to a
    boolean mask. Use a predicate once the explicit set would exceed
    ``EXPLICIT_SET_LIMIT`` entries.
    """

    marked: np.ndarray | range | Callable[[np.ndarray], np.ndarray]

    def __post_init__(self):
        marked = self.marked
        if isinstance(marked, range):
            if marked.step != 1:
                marked = np.arange(marked.start, marked.stop, marked.step, dtype=np.int64)
            elif len(marked) == 0:
                marked = np.zeros(0, dtype=np.int64)
        if not isinstance(marked, range) and not callable(marked):
            arr = np.asarray(list(marked) if not isinstance(marked, np.ndarray) else marked)
            if arr.size and not np.issubdtype(arr.dtype, np.integer):
                raise ArgumentError("marked indices must be integers")
            marked = np.unique(arr.astype(np.int64).reshape(-1))
        object.__setattr__(self, "marked", marked)

    def validate(self, m: int) -> None:
        marked = self.marked
        if isinstance(marked, range):
            check_indices(m, [marked.start, marked.stop - 1])
        elif isinstance(marked, np.ndarray):
            check_indices(m, marked)

    def mask(self, m: int) -> np.ndarray:
        """Boolean mask over all ``2**m`` indices."""
        dim = 1 << m
        out = np.zeros(dim, dtype=bool)
        marked = self.marked
        if isinstance(marked, range):
            out[marked.start:marked.stop] = True
        elif isinstance(marked, np.ndarray):
            out[marked] = True
        else:
            for lo in range(0, dim, _PREDICATE_CHUNK):
                hi = min(dim, lo + _PREDICATE_CHUNK)
                out[lo:hi] = np.asarray(marked(np.arange(lo, hi, dtype=np.int64)), dtype=bool)
        return out

    def apply_inplace(self, amps: np.ndarray, m: int) -> None:
        marked = self.marked
        if isinstance(marked, range):
            amps[marked.start:marked.stop] *= -1
        elif isinstance(marked, np.ndarray):
            amps[marked] *= -1
        else:
            dim = 1 << m
            for lo in range(0, dim, _PREDICATE_CHUNK):
                hi = min(dim, lo + _PREDICATE_CHUNK)
                sel = np.asarray(marked(np.arange(lo, hi, dtype=np.int64)), dtype=bool)
                amps[lo:hi][sel] *= -1

    def inverse(self) -> PhaseFlip:
        return self


@dataclass(frozen=True, eq=False)
class Reflect:
    """``I - 2|a><a|`` about a normalized axis state."""

    axis: StateVector
    _unit: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        norm_sq = self.axis.norm_sq()
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise ArgumentError(f"reflection axis has norm^2 {norm_sq!r}, expected 1")
        object.__setattr__(self, "_unit", self.axis.amps / np.sqrt(norm_sq))

    def validate(self, m: int) -> None:
        if self.axis.m != m:
            raise ArgumentError(f"axis has {self.axis.m} qubits, register has {m}")

    def apply_inplace(self, amps: np.ndarray, m: int) -> None:
        amps -= (2.0 * np.vdot(self._unit, amps)) * self._unit

    def inverse(self) -> Reflect:
        return self


@dataclass(frozen=True, eq=False)
class CondRot:
    """Ancilla rotation conditioned on the register value ``x``.

    Acts on ``n + 1`` qubits with the ancilla as the top qubit. Per ``x`` the
    block on ``(|0,x>, |1,x>)`` is ``[[f, g], [g, -conj(f)]]`` with
    ``g = sqrt(1 - |f|^2)``, so ``|0,x> -> f(x)|0,x> + g(x)|1,x>``. The
    adjoint of that block is the same form with ``conj(f)``.
    """

    values: np.ndarray

    def __post_init__(self):
        values = np.array(as_amplitude_table(self.values))
        if values.size == 0 or values.size & (values.size - 1):
            raise ArgumentError(f"table length {values.size} is not a power of two")
        mags = np.abs(values)
        # sqrt(1 - |f|^2) is ill-conditioned at |f| = 1; compute it once so
        # every consumer of this gate sees identical block entries
        g = np.sqrt(np.clip((1.0 - mags) * (1.0 + mags), 0.0, None))
        values.flags.writeable = False
        g.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_g", g)

    @property
    def n(self) -> int:
        return self.values.size.bit_length() - 1

    def complement(self) -> np.ndarray:
        return self._g

    def validate(self, m: int) -> None:
        if m != self.n + 1:
            raise ArgumentError(
                f"conditional rotation over {self.values.size} values needs "
                f"{self.n + 1} qubits, register has {m}"
            )

    def apply_inplace(self, amps: np.ndarray, m: int) -> None:
        f = self.values
        g = self.complement()
        half = f.size
        a0 = amps[:half].copy()
        a1 = amps[half:]
        amps[:half] = f * a0 + g * a1
        amps[half:] = g * a0 - np.conj(f) * a1

    def inverse(self) -> CondRot:
        return CondRot(np.conj(self.values))


GateStep = M | WH | PhaseFlip | Reflect | CondRot


@dataclass(frozen=True)
class UnitaryProgram:
    """Ordered gate steps on an ``m``-qubit register."""

    m: int
    steps: tuple = ()

    def __post_init__(self):
        check_width(self.m)
        steps = tuple(self.steps)
        for step in steps:
            step.validate(self.m)
        object.__setattr__(self, "steps", steps)

    def inverse(self) -> UnitaryProgram:
        return UnitaryProgram(self.m, tuple(s.inverse() for s in reversed(self.steps)))

    def then(self, *steps) -> UnitaryProgram:
        return UnitaryProgram(self.m, self.steps + tuple(steps))

    def apply_inplace(self, amps: np.ndarray) -> None:
        for step in self.steps:
            step.apply_inplace(amps, self.m)

    def apply_inverse_inplace(self, amps: np.ndarray) -> None:
        for step in reversed(self.steps):
            step.inverse().apply_inplace(amps, self.m)


# -- functional front end --------------------------------------------------


def _run_step(state: StateVector, step) -> StateVector:
    step.validate(state.m)
    amps = state.copy_amps()
    step.apply_inplace(amps, state.m)
    return StateVector(state.m, amps)


def apply_m(state: StateVector, q: int) -> StateVector:
    return _run_step(state, M(q))


def apply_wh(state: StateVector, qubits: Iterable[int]) -> StateVector:
    return _run_step(state, WH(tuple(qubits)))


def apply_phase_flip(state: StateVector, marked) -> StateVector:
    step = marked if isinstance(marked, PhaseFlip) else PhaseFlip(marked)
    return _run_step(state, step)


def apply_reflection(state: StateVector, axis: StateVector) -> StateVector:
    if axis.m != state.m:
        raise ArgumentError(f"width mismatch: axis {axis.m} vs state {state.m} qubits")
    return _run_step(state, Reflect(axis))


def apply_cond_rot(state: StateVector, f) -> StateVector:
    return _run_step(state, CondRot(f))


def _check_program(state: StateVector, p: UnitaryProgram) -> None:
    if state.m != p.m:
        raise ArgumentError(f"program is for {p.m} qubits, state has {state.m}")


def apply_program(state: StateVector, p: UnitaryProgram) -> StateVector:
    _check_program(state, p)
    amps = state.copy_amps()
    p.apply_inplace(amps)
    return StateVector(state.m, amps)


def apply_program_inverse(state: StateVector, p: UnitaryProgram) -> StateVector:
    _check_program(state, p)
    amps = state.copy_amps()
    p.apply_inverse_inplace(amps)
    return StateVector(state.m, amps)


def program(m: int, steps: Sequence = ()) -> UnitaryProgram:
    return UnitaryProgram(m, tuple(steps))
