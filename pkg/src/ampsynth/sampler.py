"""Seeded measurement sampling and empirical-vs-target comparison."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .amplify import AmplificationPlan
from .errors import ArgumentError, EmptySampleError
from .statevec import NORM_TOL, StateVector

RNG_NAME = "numpy.PCG64/SeedSequence(seed, shard)"
SHARD_SHOTS = 1 << 20
_CDF_BLOCK = 4096


def cumulative_probabilities(probs: np.ndarray) -> np.ndarray:
    """Normalized CDF with its last entry forced to exactly 1.

    Blocks are summed with ``np.cumsum`` and the running block offsets are
    carried with Neumaier compensation, so drift does not grow with the
    number of blocks.
    """
    probs = np.asarray(probs, dtype=np.float64)
    cdf = np.empty_like(probs)
    total = 0.0
    comp = 0.0
    for lo in range(0, probs.size, _CDF_BLOCK):
        block = np.cumsum(probs[lo:lo + _CDF_BLOCK])
        cdf[lo:lo + block.size] = block + (total + comp)
        x = float(block[-1])
        t = total + x
        if abs(total) >= abs(x):
            comp += (total - t) + x
        else:
            comp += (x - t) + total
        total = t
    total += comp
    if total <= 0:
        raise ArgumentError("distribution has zero total mass")
    cdf /= total
    np.minimum(cdf, 1.0, out=cdf)
    cdf[-1] = 1.0
    return cdf


def _shard_counts(cdf: np.ndarray, shots: int, seed: int, shard: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, shard])))
    draws = np.searchsorted(cdf, rng.random(shots), side="right")
    return np.minimum(draws, cdf.size - 1)


def measure_shots(state: StateVector, shots: int, seed: int, workers: int = 1) -> dict[int, int]:
    """Draw ``shots`` basis outcomes from ``|amps|^2``.

    Shots are split into fixed-size shards, each seeded from ``(seed, shard)``,
    so the result does not depend on ``workers``.
    """
    if shots < 1:
        raise ArgumentError(f"shots must be positive, got {shots}")
    if abs(state.norm_sq() - 1.0) > NORM_TOL:
        raise ArgumentError(f"state has norm^2 {state.norm_sq()!r}, expected 1")
    seed = int(seed) & 0xFFFFFFFFFFFFFFFF
    cdf = cumulative_probabilities(state.probabilities())
    sizes = [min(SHARD_SHOTS, shots - lo) for lo in range(0, shots, SHARD_SHOTS)]
    jobs = [(cdf, size, seed, k) for k, size in enumerate(sizes)]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda j: _shard_counts(*j), jobs))
    else:
        parts = [_shard_counts(*j) for j in jobs]
    idx, cnt = np.unique(np.concatenate(parts), return_counts=True)
    return {int(i): int(c) for i, c in zip(idx, cnt)}


def condition_on_ancilla(counts: dict[int, int], n: int) -> tuple[dict[int, int], int]:
    """Keep outcomes whose top (ancilla) bit is 0, keyed by register index."""
    dim = 1 << (n + 1)
    half = 1 << n
    kept = {}
    for i, c in counts.items():
        if not 0 <= i < dim:
            raise ArgumentError(f"outcome {i} out of range for {n + 1} qubits")
        if i < half:
            kept[int(i)] = int(c)
    return dict(sorted(kept.items())), sum(kept.values())


def tv_distance(p: np.ndarray, q: np.ndarray) -> float:
    return float(0.5 * np.sum(np.abs(np.asarray(p) - np.asarray(q))))


def chi_square(observed: np.ndarray, expected: np.ndarray, min_expected: float = 5.0) -> tuple[float, int]:
    """Pearson statistic with bins below ``min_expected`` pooled into one.

    Returns ``(statistic, dof)``. An observation in a bin of zero expected
    mass makes the statistic infinite.
    """
    observed = np.asarray(observed, dtype=np.float64)
    expected = np.asarray(expected, dtype=np.float64)
    big = expected >= min_expected
    obs = list(observed[big])
    exp = list(expected[big])
    pooled_o, pooled_e = observed[~big].sum(), expected[~big].sum()
    if pooled_e > 0 or pooled_o > 0:
        obs.append(pooled_o)
        exp.append(pooled_e)
    obs, exp = np.array(obs), np.array(exp)
    if np.any((exp == 0) & (obs > 0)):
        stat = math.inf
    else:
        nz = exp > 0
        stat = float(np.sum((obs[nz] - exp[nz]) ** 2 / exp[nz]))
    return stat, max(len(exp) - 1, 0)


def compare(conditioned_counts: dict[int, int], target) -> tuple[float, float, int]:
    """``(tv_distance, chi_square, dof)`` of the counts against ``target``."""
    target = np.asarray(target, dtype=np.float64)
    if abs(target.sum() - 1.0) > 1e-9:
        raise ArgumentError(f"target sums to {target.sum()!r}, expected 1")
    accepted = sum(conditioned_counts.values())
    if accepted == 0:
        raise EmptySampleError("no accepted shots to compare")
    observed = np.zeros(target.size)
    for i, c in conditioned_counts.items():
        if not 0 <= i < target.size:
            raise ArgumentError(f"outcome {i} outside target support of size {target.size}")
        observed[i] = c
    stat, dof = chi_square(observed, target * accepted)
    return tv_distance(observed / accepted, target), stat, dof


@dataclass
class SampleReport:
    shots: int
    seed: int
    counts: dict[int, int]
    conditioned_counts: dict[int, int]
    accepted: int
    tv_distance: float | None
    chi_square: float | None
    dof: int | None
    plan_echo: AmplificationPlan | None = None
    rng_name: str = field(default=RNG_NAME)

    def as_dict(self) -> dict:
        return {
            "shots": self.shots,
            "seed": self.seed,
            "accepted": self.accepted,
            "tv_distance": self.tv_distance,
            "chi_square": self.chi_square,
            "dof": self.dof,
        }


def sample_report(
    state: StateVector,
    n: int,
    target,
    shots: int,
    seed: int,
    plan_echo: AmplificationPlan | None = None,
    workers: int = 1,
) -> SampleReport:
    """Measure, condition on ancilla 0 and compare against ``target``.

    Comparison fields are ``None`` when nothing was accepted.
    """
    counts = measure_shots(state, shots, seed, workers=workers)
    cond, accepted = condition_on_ancilla(counts, n)
    tv = chi = dof = None
    if accepted:
        tv, chi, dof = compare(cond, target)
    return SampleReport(shots, int(seed), counts, cond, accepted, tv, chi, dof, plan_echo)
