"""Preparing a register superposition with amplitudes proportional to ``f``.

The program is ``U = CondRot(f) . WH(register)`` on ``n + 1`` qubits with the
ancilla on top. Starting from ``|0, 0...0>`` and amplifying onto the
ancilla-0 half, the ancilla-0 component of ``U Q^eta |s>`` is always a
multiple of ``sum_x f(x)|0,x>``; amplification only changes how much of the
probability sits there.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .amplify import (
    AmplificationPlan,
    SourceSpec,
    TargetSpec,
    overlap_u,
    plan,
    run,
    success_probability,
)
from .errors import AdaptiveFailureError, ArgumentError, ResourceError, SpecError
from .gates import WH, CondRot, UnitaryProgram, as_amplitude_table
from .statevec import MAX_QUBITS, StateVector, split_ancilla


@dataclass(frozen=True, eq=False)
class AmplitudeSpec:
    """Target amplitudes ``f`` over ``N = 2**n`` register states.

    ``input_length`` is the table length before zero padding to a power of
    two. ``origin`` is ``"amplitudes"`` or ``"probabilities"``.
    """

    values: np.ndarray
    origin: str = "amplitudes"
    input_length: int = 0
    sum_sq: float = field(init=False)

    def __post_init__(self):
        raw = np.asarray(self.values, dtype=np.complex128).reshape(-1)
        if raw.size == 0:
            raise SpecError("amplitude table is empty")
        values = np.array(as_amplitude_table(raw))
        size = 1 << (values.size - 1).bit_length()
        if size != values.size:
            values = np.concatenate([values, np.zeros(size - values.size, np.complex128)])
        sum_sq = float(np.sum(np.abs(values) ** 2))
        if sum_sq <= 0.0:
            raise SpecError("amplitude table is identically zero")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "input_length", self.input_length or raw.size)
        object.__setattr__(self, "sum_sq", sum_sq)

    @property
    def N(self) -> int:
        return self.values.size

    @property
    def n(self) -> int:
        return self.N.bit_length() - 1

    def target_distribution(self) -> np.ndarray:
        return np.abs(self.values) ** 2 / self.sum_sq


def spec_from_probabilities(p: Sequence[float]) -> AmplitudeSpec:
    """``f(x) = sqrt(p(x) / max p)``, so the largest amplitude is exactly 1."""
    p = np.asarray(p, dtype=np.float64).reshape(-1)
    if p.size == 0:
        raise SpecError("probability table is empty")
    if not np.all(np.isfinite(p)):
        raise SpecError("probability table contains non-finite values")
    if np.any(p < 0):
        raise SpecError("probabilities must be non-negative")
    top = p.max()
    if top <= 0:
        raise SpecError("probability table is identically zero")
    return AmplitudeSpec(np.sqrt(p / top), origin="probabilities", input_length=p.size)


def indicator_spec(n: int, points: Sequence[int]) -> AmplitudeSpec:
    """``f = 1`` on ``points`` and 0 elsewhere, over ``2**n`` states."""
    values = np.zeros(1 << n, dtype=np.complex128)
    pts = np.asarray(points, dtype=np.int64)
    if pts.size == 0:
        raise SpecError("indicator needs at least one point")
    if pts.min() < 0 or pts.max() >= values.size:
        raise SpecError(f"indicator point out of range for n={n}")
    values[pts] = 1.0
    return AmplitudeSpec(values)


def build_program(f: AmplitudeSpec) -> tuple[UnitaryProgram, SourceSpec, TargetSpec]:
    """``(U, s, t)`` with ``s = |0, 0...0>`` and ``t`` the ancilla-0 half."""
    m = f.n + 1
    if m > MAX_QUBITS:
        raise ResourceError(f"{m} qubits exceeds the cap of {MAX_QUBITS}")
    p = UnitaryProgram(m, (WH(tuple(range(f.n))), CondRot(f.values)))
    return p, SourceSpec(basis=0), TargetSpec(range(0, f.N))


@dataclass(frozen=True, eq=False)
class SynthesisResult:
    plan: AmplificationPlan | None
    eta: int
    final_state: StateVector
    success_probability: float
    conditioned_amplitudes: np.ndarray
    conditioned_distribution: np.ndarray
    conditioned_state_error: float


def proportionality_error(amps: np.ndarray, f: np.ndarray) -> float:
    """Max ``|amps - c f|`` for the least-squares complex ``c``."""
    c = np.vdot(f, amps) / np.vdot(f, f)
    return float(np.max(np.abs(amps - c * f)))


def _result(f: AmplitudeSpec, pl: AmplificationPlan, eta: int, final: StateVector) -> SynthesisResult:
    zero, _ = split_ancilla(final)
    success = float(np.vdot(zero, zero).real)
    if success > 0:
        cond = zero / math.sqrt(success)
        dist = np.abs(cond) ** 2
        dist /= dist.sum()
        err = proportionality_error(cond, f.values)
    else:
        cond = np.zeros_like(zero)
        dist = np.zeros(zero.size)
        err = math.nan
    return SynthesisResult(pl, eta, final, success, cond, dist, err)


def synthesize(f: AmplitudeSpec, eta_override: int | None = None) -> SynthesisResult:
    p, s, t = build_program(f)
    pl = plan(overlap_u(p, s, t))
    eta = pl.eta if eta_override is None else int(eta_override)
    if eta < 0:
        raise ArgumentError(f"iteration count must be non-negative, got {eta}")
    return _result(f, pl, eta, run(p, s, t, eta))


# -- unknown normalization -------------------------------------------------


@dataclass(frozen=True)
class RuntimeSchedule:
    """Iteration counts tried in successive rounds when ``sum |f|^2`` is unknown.

    Round 1 uses ``eta = 0``; round ``j >= 2`` uses ``ceil(growth**(j-2))``
    until that reaches ``cap`` (default ``ceil(pi/4 sqrt(N))``, the count for
    the smallest admissible ``sum |f|^2 = 1``). From then on ``eta`` is drawn
    uniformly from ``0..cap`` so that no fixed count can resonate badly with
    the unknown angle.
    """

    growth: float = 3.0
    cap: int | None = None
    max_rounds: int = 64

    def __post_init__(self):
        if self.growth <= 1.0:
            raise ArgumentError("schedule growth must exceed 1")
        if self.max_rounds < 0:
            raise ArgumentError("max_rounds must be non-negative")

    def cap_for(self, N: int) -> int:
        return self.cap if self.cap is not None else math.ceil(math.pi / 4 * math.sqrt(N))

    def fixed_etas(self, N: int) -> list[int]:
        """The deterministic prefix, ending with the first count that hits the cap."""
        cap = self.cap_for(N)
        etas = [0]
        j = 0
        while etas[-1] < cap:
            etas.append(min(math.ceil(self.growth**j - 1e-9), cap))
            j += 1
        return etas

    def eta(self, round_index: int, N: int, rng: np.random.Generator) -> int:
        """Count for 0-based ``round_index``."""
        fixed = self.fixed_etas(N)
        if round_index < len(fixed):
            return fixed[round_index]
        return int(rng.integers(0, self.cap_for(N) + 1))

    def round_success(self, round_index: int, N: int, theta: float) -> float:
        """Exact probability that round ``round_index`` heralds ancilla 0."""
        fixed = self.fixed_etas(N)
        if round_index < len(fixed):
            return success_probability(theta, fixed[round_index])
        cap = self.cap_for(N)
        return float(np.mean([success_probability(theta, e) for e in range(cap + 1)]))


@dataclass(frozen=True, eq=False)
class AdaptiveOutcome:
    result: SynthesisResult
    rounds: int
    total_iterations: int
    etas: tuple[int, ...]


def adaptive_synthesize(
    f: AmplitudeSpec, seed: int, schedule: RuntimeSchedule | None = None
) -> AdaptiveOutcome:
    """Repeat prepare-amplify-measure until the ancilla reads 0.

    The planner never looks at ``f.sum_sq``; each round follows ``schedule``
    and a failed round is discarded and restarted from ``|s>``. The measured
    round's conditioned register state is returned.
    """
    schedule = schedule or RuntimeSchedule()
    rng = np.random.default_rng(seed)
    p, s, t = build_program(f)
    total = 0
    etas = []
    cache: dict[int, SynthesisResult] = {}
    for r in range(schedule.max_rounds):
        eta = schedule.eta(r, f.N, rng)
        etas.append(eta)
        total += eta
        if eta not in cache:
            cache[eta] = _result(f, None, eta, run(p, s, t, eta))
        res = cache[eta]
        if rng.random() < res.success_probability:
            return AdaptiveOutcome(res, r + 1, total, tuple(etas))
    raise AdaptiveFailureError(len(etas), total)
