"""Generalized amplitude amplification ``Q = -I_s U^-1 I_t U``.

``U`` is any :class:`~ampsynth.gates.UnitaryProgram`, ``s`` a basis or
arbitrary source state and ``t`` a set of target basis states. With
``u = sqrt(sum_t |<t|U|s>|^2)`` and ``theta = arcsin(u)``, ``Q`` rotates the
plane spanned by ``|s>`` and ``w = sum_t U_ts U^-1|t>`` by ``2 theta``, so the
target mass of ``U Q^eta |s>`` is ``sin^2((2 eta + 1) theta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, DegenerateOverlapError
from .gates import PhaseFlip, UnitaryProgram
from .statevec import NORM_TOL, StateVector, basis_state, check_index

U_FLOOR = 1e-12
_TIE_TOL = 1e-15


@dataclass(frozen=True, eq=False)
class SourceSpec:
    """Either a basis index or an arbitrary normalized state."""

    basis: int | None = None
    state: StateVector | None = None

    def __post_init__(self):
        if (self.basis is None) == (self.state is None):
            raise ArgumentError("give exactly one of basis or state")
        if self.state is not None and abs(self.state.norm_sq() - 1.0) > NORM_TOL:
            raise ArgumentError("source state is not normalized")

    def vector(self, m: int) -> StateVector:
        if self.state is not None:
            if self.state.m != m:
                raise ArgumentError(f"source has {self.state.m} qubits, expected {m}")
            return self.state
        return basis_state(m, self.basis)

    def reflect_inplace(self, amps: np.ndarray, m: int) -> None:
        """``I - 2|s><s|`` on a raw amplitude array."""
        if self.state is None:
            amps[check_index(m, self.basis)] *= -1
        else:
            axis = self.vector(m).amps
            amps -= (2.0 * np.vdot(axis, amps)) * axis


@dataclass(frozen=True, eq=False)
class TargetSpec:
    """Non-empty set of target basis indices (see :class:`PhaseFlip`)."""

    targets: object

    def __post_init__(self):
        flip = self.targets if isinstance(self.targets, PhaseFlip) else PhaseFlip(self.targets)
        marked = flip.marked
        if (isinstance(marked, (range, np.ndarray))) and len(marked) == 0:
            raise ArgumentError("target set is empty")
        object.__setattr__(self, "targets", flip)

    @property
    def flip(self) -> PhaseFlip:
        return self.targets

    def validate(self, m: int) -> None:
        self.flip.validate(m)

    def mass(self, amps: np.ndarray, m: int) -> float:
        marked = self.flip.marked
        if isinstance(marked, range):
            seg = amps[marked.start:marked.stop]
        elif isinstance(marked, np.ndarray):
            seg = amps[marked]
        else:
            seg = amps[self.flip.mask(m)]
        return float(np.vdot(seg, seg).real)

    def split_mass(self, amps: np.ndarray, m: int) -> tuple[float, float]:
        """(target mass, non-target mass), each summed directly."""
        keep = self.flip.mask(m)
        on, off = amps[keep], amps[~keep]
        return float(np.vdot(on, on).real), float(np.vdot(off, off).real)

    def project_inplace(self, amps: np.ndarray, m: int) -> None:
        """Zero every non-target amplitude."""
        keep = self.flip.mask(m)
        amps[~keep] = 0


def as_source(s) -> SourceSpec:
    if isinstance(s, SourceSpec):
        return s
    if isinstance(s, StateVector):
        return SourceSpec(state=s)
    return SourceSpec(basis=int(s))


def as_targets(t) -> TargetSpec:
    return t if isinstance(t, TargetSpec) else TargetSpec(t)


@dataclass(frozen=True)
class AmplificationPlan:
    u: float
    theta: float
    eta: int
    predicted_success: float

    def as_dict(self) -> dict:
        return {
            "u": self.u,
            "theta": self.theta,
            "eta": self.eta,
            "predicted_success": self.predicted_success,
        }


@dataclass(frozen=True)
class SubspaceAnalysis:
    """Action of ``Q`` on the plane of ``|s>`` and ``w``.

    ``two_by_two`` holds the coordinates of ``Q|s>`` and ``Q(w/u)`` (as
    columns) in the non-orthogonal pair ``(|s>, w/u)``; the residuals are the
    norms of the parts of those images lying outside the plane.
    """

    u: float
    theta: float
    two_by_two: np.ndarray
    eigenvalues: tuple[complex, complex]
    residual_s: float
    residual_w: float
    w: np.ndarray


def _setup(p: UnitaryProgram, s, t) -> tuple[SourceSpec, TargetSpec]:
    s, t = as_source(s), as_targets(t)
    t.validate(p.m)
    s.vector(p.m)
    return s, t


def overlap_u(p: UnitaryProgram, s, t) -> float:
    """``sqrt(sum_t |<t|U|s>|^2)`` by simulating ``U|s>``."""
    s, t = _setup(p, s, t)
    amps = s.vector(p.m).copy_amps()
    p.apply_inplace(amps)
    u = math.sqrt(min(t.mass(amps, p.m), 1.0))
    if u < U_FLOOR:
        raise DegenerateOverlapError(f"source/target overlap u={u!r} is zero")
    return u


def overlap_angle(p: UnitaryProgram, s, t) -> float:
    """``arcsin u`` evaluated as ``atan2(u, sqrt(1 - u^2))`` from the two masses.

    Stays accurate when ``u`` is within rounding of 1, where ``asin`` of the
    rounded overlap would lose half the digits.
    """
    s, t = _setup(p, s, t)
    amps = s.vector(p.m).copy_amps()
    p.apply_inplace(amps)
    on, off = t.split_mass(amps, p.m)
    if math.sqrt(on) < U_FLOOR:
        raise DegenerateOverlapError(f"source/target overlap u={math.sqrt(on)!r} is zero")
    return math.atan2(math.sqrt(on), math.sqrt(off))


def success_probability(theta: float, eta: int) -> float:
    return math.sin((2 * eta + 1) * theta) ** 2


def plan(u: float) -> AmplificationPlan:
    """Iteration count maximizing ``sin^2((2j+1) arcsin u)`` over integers ``j >= 0``."""
    if not (isinstance(u, (int, float, np.floating)) and 0.0 < u <= 1.0):
        raise ArgumentError(f"overlap u must lie in (0, 1], got {u!r}")
    theta = math.asin(u)
    j_star = max(math.pi / (4.0 * theta) - 0.5, 0.0)
    lo = math.floor(j_star)
    eta = lo
    if success_probability(theta, lo + 1) > success_probability(theta, lo) + _TIE_TOL:
        eta = lo + 1
    return AmplificationPlan(float(u), theta, int(eta), success_probability(theta, eta))


def _q_inplace(amps: np.ndarray, p: UnitaryProgram, s: SourceSpec, t: TargetSpec) -> None:
    p.apply_inplace(amps)
    t.flip.apply_inplace(amps, p.m)
    p.apply_inverse_inplace(amps)
    s.reflect_inplace(amps, p.m)
    amps *= -1


def apply_q(state: StateVector, p: UnitaryProgram, s, t) -> StateVector:
    """One iteration: ``U``, flip targets, ``U^-1``, reflect about ``s``, negate."""
    if state.m != p.m:
        raise ArgumentError(f"program is for {p.m} qubits, state has {state.m}")
    s, t = _setup(p, s, t)
    amps = state.copy_amps()
    _q_inplace(amps, p, s, t)
    return StateVector(p.m, amps)


def run(p: UnitaryProgram, s, t, eta: int) -> StateVector:
    """``U Q^eta |s>``."""
    if eta < 0:
        raise ArgumentError(f"iteration count must be non-negative, got {eta}")
    s, t = _setup(p, s, t)
    amps = s.vector(p.m).copy_amps()
    for _ in range(int(eta)):
        _q_inplace(amps, p, s, t)
    p.apply_inplace(amps)
    return StateVector(p.m, amps)


def eigenvalues_2x2(a: np.ndarray) -> tuple[complex, complex]:
    """Roots of the characteristic quadratic, ordered by imaginary part."""
    tr = a[0, 0] + a[1, 1]
    det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    disc = np.sqrt(complex(tr * tr - 4.0 * det))
    l1, l2 = (tr + disc) / 2.0, (tr - disc) / 2.0
    # avoid cancellation in the smaller-magnitude root
    if abs(l1) < abs(l2):
        l1, l2 = l2, l1
    if l1 != 0:
        l2 = det / l1
    return tuple(sorted((complex(l1), complex(l2)), key=lambda z: (z.imag, z.real)))


def subspace_analysis(p: UnitaryProgram, s, t) -> SubspaceAnalysis:
    s, t = _setup(p, s, t)
    u = overlap_u(p, s, t)
    theta = overlap_angle(p, s, t)
    m = p.m
    s_vec = s.vector(m).amps

    # w = U^-1 P_t U |s>  (= sum_t U_ts U^-1 |t>)
    w = np.array(s_vec)
    p.apply_inplace(w)
    t.project_inplace(w, m)
    p.apply_inverse_inplace(w)

    q_s = np.array(s_vec)
    _q_inplace(q_s, p, s, t)
    q_w = w / u
    _q_inplace(q_w, p, s, t)

    # orthonormal pair from {|s>, w}; <s|w> = u^2
    e1 = s_vec
    perp = w - np.vdot(e1, w) * e1
    perp_norm = float(np.linalg.norm(perp))
    planar = perp_norm > 1e-12 * max(u, 1.0)
    e2 = perp / perp_norm if planar else None

    def residual(x: np.ndarray) -> float:
        r = x - np.vdot(e1, x) * e1
        if planar:
            r = r - np.vdot(e2, r) * e2
        return float(np.linalg.norm(r))

    if planar:
        q_e2 = (u * q_w - np.vdot(e1, w) * q_s) / perp_norm
        basis = np.column_stack([e1, e2])
        ortho = basis.conj().T @ np.column_stack([q_s, q_e2])
        # columns of change: |s> and w/u written in (e1, e2)
        change = np.array([[1.0, u], [0.0, perp_norm / u]], dtype=np.complex128)
        two = np.linalg.solve(change, ortho @ change)
        eig = eigenvalues_2x2(ortho)
    else:
        # u = 1: w coincides with |s>, Q acts as a scalar on the line
        lam = np.vdot(e1, q_s)
        two = np.array([[lam, 0], [0, lam]], dtype=np.complex128)
        eig = (complex(lam), complex(lam))
    return SubspaceAnalysis(
        u=u,
        theta=theta,
        two_by_two=two,
        eigenvalues=eig,
        residual_s=residual(q_s),
        residual_w=residual(q_w),
        w=w,
    )


def probability_of_targets(state: StateVector, t) -> float:
    t = as_targets(t)
    t.validate(state.m)
    return t.mass(state.amps, state.m)
