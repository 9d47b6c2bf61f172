"""Brute-force dense reference for small registers.

Matrices here are assembled from Kronecker products and explicit loops,
never by running the strided kernels, so they can serve as an independent
check on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .amplify import as_source, as_targets
from .errors import ResourceError
from .gates import WH, CondRot, M, PhaseFlip, Reflect, UnitaryProgram, apply_program
from .statevec import StateVector, random_state

DENSE_CAP = 6
_M = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2.0)


def _check_cap(m: int, cap: int | None) -> None:
    cap = DENSE_CAP if cap is None else cap
    if m > cap:
        raise ResourceError(f"dense oracle limited to {cap} qubits, got {m}")


@dataclass(frozen=True, eq=False)
class DenseUnitary:
    entries: np.ndarray

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def unitarity_deviation(self) -> float:
        """``max |U^dag U - I|``."""
        gram = self.entries.conj().T @ self.entries
        return float(np.max(np.abs(gram - np.eye(self.dim))))

    def __matmul__(self, other):
        if isinstance(other, DenseUnitary):
            return DenseUnitary(self.entries @ other.entries)
        return self.entries @ other


def _single_qubit(m: int, q: int, gate: np.ndarray) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for k in reversed(range(m)):
        out = np.kron(out, gate if k == q else np.eye(2))
    return out


def dense_step(step, m: int) -> np.ndarray:
    dim = 1 << m
    if isinstance(step, M):
        return _single_qubit(m, step.qubit, _M)
    if isinstance(step, WH):
        out = np.eye(dim, dtype=np.complex128)
        for q in step.qubits:
            out = _single_qubit(m, q, _M) @ out
        return out
    if isinstance(step, PhaseFlip):
        return np.diag(np.where(step.mask(m), -1.0, 1.0)).astype(np.complex128)
    if isinstance(step, Reflect):
        a = step.axis.amps / np.linalg.norm(step.axis.amps)
        return np.eye(dim) - 2.0 * np.outer(a, a.conj())
    if isinstance(step, CondRot):
        half = dim // 2
        out = np.zeros((dim, dim), dtype=np.complex128)
        comp = step.complement()
        for x in range(half):
            f = complex(step.values[x])
            g = float(comp[x])
            out[x, x] = f
            out[x + half, x] = g
            out[x, x + half] = g
            out[x + half, x + half] = -f.conjugate()
        return out
    raise TypeError(f"unknown gate step {step!r}")


def dense_of_program(p: UnitaryProgram, cap: int | None = None) -> DenseUnitary:
    _check_cap(p.m, cap)
    out = np.eye(1 << p.m, dtype=np.complex128)
    for step in p.steps:
        out = dense_step(step, p.m) @ out
    return DenseUnitary(out)


def dense_q(p: UnitaryProgram, s, t, cap: int | None = None) -> DenseUnitary:
    """``-R_s P^dag F_t P``."""
    _check_cap(p.m, cap)
    s, t = as_source(s), as_targets(t)
    dim = 1 << p.m
    big_p = dense_of_program(p, cap).entries
    flip = dense_step(t.flip, p.m)
    sv = s.vector(p.m).amps
    refl = np.eye(dim) - 2.0 * np.outer(sv, sv.conj())
    return DenseUnitary(-refl @ big_p.conj().T @ flip @ big_p)


def equivalence_check(p: UnitaryProgram, trials: int, seed: int, cap: int | None = None) -> float:
    """Max amplitude gap between strided application and dense mat-vec."""
    big = dense_of_program(p, cap)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        v = random_state(p.m, rng)
        gap = np.max(np.abs(apply_program(v, p).amps - big @ v.amps))
        worst = max(worst, float(gap))
    return worst


def norm_preservation_deviation(q: DenseUnitary, trials: int, rng: np.random.Generator) -> float:
    m = q.dim.bit_length() - 1
    worst = 0.0
    for _ in range(trials):
        v = random_state(m, rng).amps
        worst = max(worst, abs(float(np.linalg.norm(q @ v)) - 1.0))
    return worst


def projected_eigenvalues(q: DenseUnitary, s_vec: np.ndarray, w: np.ndarray) -> tuple[complex, complex]:
    """Eigenvalues of ``q`` compressed to the orthonormalized span of ``s`` and ``w``.

    Solved from the 2x2 characteristic quadratic; ordered by imaginary part.
    """
    e1 = s_vec / np.linalg.norm(s_vec)
    perp = w - np.vdot(e1, w) * e1
    e2 = perp / np.linalg.norm(perp)
    basis = np.column_stack([e1, e2])
    a = basis.conj().T @ (q.entries @ basis)
    half_tr = (a[0, 0] + a[1, 1]) / 2.0
    det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    root = np.sqrt(complex(half_tr * half_tr - det))
    pair = (complex(half_tr + root), complex(half_tr - root))
    return tuple(sorted(pair, key=lambda z: (z.imag, z.real)))


def random_program(m: int, rng: np.random.Generator, depth: int = 4, complex_f: bool = True) -> UnitaryProgram:
    """Random mix of every gate kind; used by the self-check and tests."""
    steps = []
    kinds = ["M", "WH", "PhaseFlip", "Reflect"] + (["CondRot"] if m >= 1 else [])
    for _ in range(depth):
        kind = kinds[rng.integers(len(kinds))]
        if kind == "M" and m >= 1:
            steps.append(M(int(rng.integers(m))))
        elif kind == "WH" and m >= 1:
            k = int(rng.integers(1, m + 1))
            steps.append(WH(tuple(int(q) for q in rng.permutation(m)[:k])))
        elif kind == "PhaseFlip":
            k = int(rng.integers(0, (1 << m) + 1))
            steps.append(PhaseFlip(rng.permutation(1 << m)[:k]))
        elif kind == "Reflect":
            steps.append(Reflect(random_state(m, rng)))
        elif kind == "CondRot":
            steps.append(CondRot(random_f(m - 1, rng, complex_f)))
    return UnitaryProgram(m, tuple(steps))


def random_f(n: int, rng: np.random.Generator, complex_f: bool = True, boundary: bool = True) -> np.ndarray:
    """Random table with ``|f| <= 1``, optionally seeded with exact 0 and 1 magnitudes."""
    size = 1 << n
    mags = rng.uniform(0.0, 1.0, size)
    if boundary and size >= 2:
        mags[rng.integers(size)] = 0.0
        mags[rng.integers(size)] = 1.0
    phases = rng.uniform(0, 2 * np.pi, size) if complex_f else np.zeros(size)
    return mags * np.exp(1j * phases)



def random_instance(m: int, rng: np.random.Generator, depth: int | None = None, min_u: float = 1e-3):
    """Random ``(program, source, targets)`` with overlap at least ``min_u``.

    Sources alternate between basis indices and random states.
    """
    from .amplify import DegenerateOverlapError, overlap_u

    while True:
        d = int(rng.integers(1, 6)) if depth is None else depth
        p = random_program(m, rng, depth=d)
        k = int(rng.integers(1, (1 << m) + 1))
        targets = rng.permutation(1 << m)[:k]
        source = int(rng.integers(1 << m)) if rng.random() < 0.5 else random_state(m, rng)
        try:
            if overlap_u(p, source, targets) >= min_u:
                return p, source, targets
        except DegenerateOverlapError:
            pass


SELF_CHECK_TOLERANCES = {
    "equivalence": 1e-12,
    "unitarity": 1e-12,
    "invariance": 1e-10,
    "rotation": 1e-10,
}


def self_check(max_qubits: int = 5, trials: int = 50, seed: int = 0) -> dict[str, float]:
    """Worst deviation per suite over ``trials`` random instances."""
    from .amplify import probability_of_targets, run, subspace_analysis, success_probability

    _check_cap(max_qubits, None)
    rng = np.random.default_rng(seed)
    worst = dict.fromkeys(SELF_CHECK_TOLERANCES, 0.0)
    for k in range(trials):
        m = int(rng.integers(1, max_qubits + 1))
        p, s, t = random_instance(m, rng)
        worst["equivalence"] = max(worst["equivalence"], equivalence_check(p, 2, seed + k))
        worst["unitarity"] = max(
            worst["unitarity"],
            dense_of_program(p).unitarity_deviation(),
            dense_q(p, s, t).unitarity_deviation(),
        )
        sa = subspace_analysis(p, s, t)
        theta = sa.theta
        expected = sorted([np.exp(-2j * theta), np.exp(2j * theta)], key=lambda z: (z.imag, z.real))
        eig_gap = max(abs(a - b) for a, b in zip(sa.eigenvalues, expected))
        worst["invariance"] = max(worst["invariance"], sa.residual_s, sa.residual_w, eig_gap)
        for eta in range(11):
            mass = probability_of_targets(run(p, s, t, eta), t)
            worst["rotation"] = max(worst["rotation"], abs(mass - success_probability(theta, eta)))
    return worst
