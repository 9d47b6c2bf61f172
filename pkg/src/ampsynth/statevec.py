"""Dense state vectors over an m-qubit register.

Basis index ``i`` encodes qubit ``q`` in bit ``q`` of ``i``. When a register
carries an ancilla it is the most significant qubit, so index
``ancilla * 2**n + x`` and the two ancilla halves are contiguous.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, ResourceError

MAX_QUBITS = 26
NORM_TOL = 1e-10


def check_width(m: int) -> None:
    if m < 0:
        raise ArgumentError(f"qubit count must be non-negative, got {m}")
    if m > MAX_QUBITS:
        raise ResourceError(f"{m} qubits exceeds the cap of {MAX_QUBITS}")


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitudes of an m-qubit register.

    The amplitude array is made read-only on construction; gate functions
    return new states instead of mutating.
    """

    m: int
    amps: np.ndarray

    def __post_init__(self):
        check_width(self.m)
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != 1 << self.m:
            raise ArgumentError(
                f"expected {1 << self.m} amplitudes for m={self.m}, got {amps.shape[0]}"
            )
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)

    @classmethod
    def from_amplitudes(cls, amps, normalize: bool = False) -> StateVector:
        amps = np.asarray(amps, dtype=np.complex128).reshape(-1)
        dim = amps.shape[0]
        if dim == 0 or dim & (dim - 1):
            raise ArgumentError(f"amplitude count {dim} is not a power of two")
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise ArgumentError("cannot normalize the zero vector")
            amps = amps / norm
        return cls(dim.bit_length() - 1, amps)

    @property
    def dim(self) -> int:
        return 1 << self.m

    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def copy_amps(self) -> np.ndarray:
        """Writable copy of the amplitudes."""
        return np.array(self.amps)

    def __len__(self) -> int:
        return self.dim

    def __repr__(self) -> str:
        return f"StateVector(m={self.m}, amps={self.amps!r})"


def check_index(m: int, i: int) -> int:
    if isinstance(i, (bool, np.bool_)) or not isinstance(i, (int, np.integer)):
        raise ArgumentError(f"basis index must be an integer, got {i!r}")
    if not 0 <= i < (1 << m):
        raise ArgumentError(f"basis index {i} out of range for {m} qubits")
    return int(i)


def check_indices(m: int, indices: Iterable[int]) -> np.ndarray:
    idx = np.asarray(list(indices) if not isinstance(indices, np.ndarray) else indices)
    if idx.size == 0:
        return np.zeros(0, dtype=np.int64)
    if not np.issubdtype(idx.dtype, np.integer):
        raise ArgumentError("basis indices must be integers")
    idx = idx.astype(np.int64).reshape(-1)
    if idx.min() < 0 or idx.max() >= (1 << m):
        raise ArgumentError(f"basis index out of range for {m} qubits")
    return np.unique(idx)


def basis_state(m: int, i: int) -> StateVector:
    """One-hot state ``|i>`` on ``m`` qubits."""
    check_width(m)
    i = check_index(m, i)
    amps = np.zeros(1 << m, dtype=np.complex128)
    amps[i] = 1.0
    return StateVector(m, amps)


def random_state(m: int, rng: np.random.Generator) -> StateVector:
    """Haar-ish random normalized state (complex Gaussian, normalized)."""
    check_width(m)
    amps = rng.standard_normal(1 << m) + 1j * rng.standard_normal(1 << m)
    return StateVector(m, amps / np.linalg.norm(amps))


def _check_same_width(a: StateVector, b: StateVector) -> None:
    if a.m != b.m:
        raise ArgumentError(f"width mismatch: {a.m} vs {b.m} qubits")


def inner_product(a: StateVector, b: StateVector) -> complex:
    """``<a|b>``, conjugating the first argument."""
    _check_same_width(a, b)
    return complex(np.vdot(a.amps, b.amps))


def probability_mass(a: StateVector, marked) -> float:
    """Total probability on the marked basis indices.

    ``marked`` may be any iterable of indices; a ``range`` with unit step is
    summed as a slice without materializing the index set.
    """
    if isinstance(marked, range) and marked.step == 1:
        if len(marked) == 0:
            return 0.0
        check_index(a.m, marked.start)
        check_index(a.m, marked.stop - 1)
        seg = a.amps[marked.start:marked.stop]
        return float(np.vdot(seg, seg).real)
    idx = check_indices(a.m, marked)
    seg = a.amps[idx]
    return float(np.vdot(seg, seg).real)


def split_ancilla(a: StateVector) -> tuple[np.ndarray, np.ndarray]:
    """Split into the (ancilla=0, ancilla=1) halves, unnormalized."""
    if a.m == 0:
        raise ArgumentError("a 0-qubit register has no ancilla")
    half = a.dim // 2
    return np.array(a.amps[:half]), np.array(a.amps[half:])
