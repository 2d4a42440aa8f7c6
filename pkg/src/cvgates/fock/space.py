"""Truncated Fock spaces, dense operators and states.

Tensor ordering is the qubit factor first (when present), then modes ``1..N``;
flattening is row-major, so the last mode varies fastest.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

DEFAULT_BUDGET = 5000


class TruncationError(ValueError):
    """A state or operator does not fit in the truncated space."""


class BudgetError(ValueError):
    """A dense block would exceed the configured dimension budget."""


def dimension_budget() -> int:
    """Dense dimension budget; the ``CVGATE_BUDGET`` environment variable overrides the default."""
    raw = os.environ.get("CVGATE_BUDGET")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise ValueError(f"CVGATE_BUDGET must be an integer, got {raw!r}") from None
    return DEFAULT_BUDGET


def check_budget(rows: int, cols: int, budget: int | None = None) -> None:
    """A rows x cols dense block is allowed iff rows * cols <= budget**2."""
    budget = budget or dimension_budget()
    if rows * cols > budget * budget:
        raise BudgetError(
            f"dense block {rows}x{cols} exceeds budget {budget} (sqrt of entries {math.isqrt(rows * cols)})"
        )


@dataclass(frozen=True)
class FockSpace:
    n_modes: int
    cutoff: int
    n_qubits: int = 0

    def __post_init__(self):
        if self.n_modes < 1:
            raise ValueError("need at least one mode")
        if self.cutoff < 2:
            raise ValueError(f"cutoff must be >= 2, got {self.cutoff}")
        if self.n_qubits not in (0, 1):
            raise ValueError("only 0 or 1 control qubits are supported")

    @property
    def shape(self) -> tuple[int, ...]:
        return (2,) * self.n_qubits + (self.cutoff,) * self.n_modes

    @property
    def dim(self) -> int:
        return 2**self.n_qubits * self.cutoff**self.n_modes

    def mode_axis(self, mode: int) -> int:
        if not 1 <= mode <= self.n_modes:
            raise ValueError(f"mode {mode} out of range 1..{self.n_modes}")
        return self.n_qubits + mode - 1

    def total_excitation(self) -> np.ndarray:
        """Sum of photon numbers for every basis index (qubit ignored)."""
        grids = np.meshgrid(*[np.arange(n) for n in self.shape], indexing="ij")
        tot = sum(grids[self.n_qubits :])
        return np.asarray(tot).ravel()

    def qubit_values(self) -> np.ndarray:
        if not self.n_qubits:
            return np.zeros(self.dim, dtype=int)
        return np.repeat([0, 1], self.cutoff**self.n_modes)

    def index(self, ns: tuple[int, ...], qubit: int | None = None) -> int:
        full = ((qubit,) if self.n_qubits else ()) + tuple(ns)
        if self.n_qubits and qubit is None:
            raise ValueError("space has a qubit; pass its value")
        return int(np.ravel_multi_index(full, self.shape))


@dataclass(frozen=True, eq=False)
class FockOperator:
    space: FockSpace
    matrix: np.ndarray

    def __post_init__(self):
        if self.matrix.shape != (self.space.dim, self.space.dim):
            raise ValueError(f"matrix shape {self.matrix.shape} does not match dimension {self.space.dim}")

    def __matmul__(self, other: "FockOperator") -> "FockOperator":
        if other.space != self.space:
            raise ValueError("operators live on different spaces")
        return FockOperator(self.space, self.matrix @ other.matrix)

    @property
    def dag(self) -> "FockOperator":
        return FockOperator(self.space, self.matrix.conj().T)


@dataclass(frozen=True, eq=False)
class FockStateVec:
    space: FockSpace
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.amplitudes.shape != (self.space.dim,):
            raise ValueError(f"amplitude vector of length {self.amplitudes.shape} does not match {self.space.dim}")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "FockStateVec":
        n = self.norm
        if n < 1e-12:
            raise ValueError("cannot normalize a zero vector")
        return FockStateVec(self.space, self.amplitudes / n)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.space.shape)


@lru_cache(maxsize=None)
def single_mode_ops(cutoff: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Truncated ``a``, ``x``, ``p`` and ``n`` for one mode (read-only arrays)."""
    if cutoff < 2:
        raise ValueError(f"cutoff must be >= 2, got {cutoff}")
    a = np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), 1).astype(complex)
    x = (a + a.conj().T) / math.sqrt(2)
    p = (a - a.conj().T) / (1j * math.sqrt(2))
    n = np.diag(np.arange(cutoff, dtype=float)).astype(complex)
    for m in (a, x, p, n):
        m.setflags(write=False)
    return a, x, p, n


class LadderOps(NamedTuple):
    a: list[np.ndarray]
    adag: list[np.ndarray]
    x: list[np.ndarray]
    p: list[np.ndarray]
    number: list[np.ndarray]
    P0: np.ndarray | None
    P1: np.ndarray | None


def embed(space: FockSpace, op: np.ndarray, mode: int) -> np.ndarray:
    """Single-mode matrix lifted to the full space."""
    factors = [np.eye(2)] * space.n_qubits + [np.eye(space.cutoff)] * space.n_modes
    factors[space.mode_axis(mode)] = op
    out = np.ones((1, 1), dtype=complex)
    for f in factors:
        out = np.kron(out, f)
    return out


def ladder_ops(space: FockSpace) -> LadderOps:
    """Full-space ladder, quadrature and number matrices per mode, plus qubit projectors."""
    check_budget(space.dim, space.dim)
    a, x, p, n = single_mode_ops(space.cutoff)
    ops = LadderOps(
        [embed(space, a, m) for m in range(1, space.n_modes + 1)],
        [embed(space, a.conj().T, m) for m in range(1, space.n_modes + 1)],
        [embed(space, x, m) for m in range(1, space.n_modes + 1)],
        [embed(space, p, m) for m in range(1, space.n_modes + 1)],
        [embed(space, n, m) for m in range(1, space.n_modes + 1)],
        None,
        None,
    )
    if space.n_qubits:
        rest = np.eye(space.cutoff**space.n_modes)
        ops = ops._replace(
            P0=np.kron(np.diag([1.0, 0.0]), rest).astype(complex),
            P1=np.kron(np.diag([0.0, 1.0]), rest).astype(complex),
        )
    return ops


def guard_mask(space: FockSpace, max_total_excitation: int) -> np.ndarray:
    """Boolean mask of basis states with total excitation <= ``max_total_excitation``."""
    return space.total_excitation() <= max_total_excitation


def project_subspace(space: FockSpace, max_total_excitation: int) -> FockOperator:
    if not 0 <= max_total_excitation <= space.n_modes * (space.cutoff - 1):
        raise ValueError(f"guard {max_total_excitation} outside 0..{space.n_modes * (space.cutoff - 1)}")
    check_budget(space.dim, space.dim)
    return FockOperator(space, np.diag(guard_mask(space, max_total_excitation).astype(complex)))


def expm_unitary(generator, tol: float = 1e-10) -> np.ndarray | FockOperator:
    """``exp(A)`` for anti-Hermitian ``A = iG`` via eigendecomposition of ``G``.

    Accepts an ndarray or a :class:`FockOperator` and returns the same kind.
    """
    wrap = isinstance(generator, FockOperator)
    A = generator.matrix if wrap else np.asarray(generator, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(A), initial=0.0)))
    if np.max(np.abs(A + A.conj().T), initial=0.0) > tol * scale:
        raise ValueError("generator is not anti-Hermitian")
    G = (A / 1j + (A / 1j).conj().T) / 2
    w, V = np.linalg.eigh(G)
    U = (V * np.exp(1j * w)) @ V.conj().T
    return FockOperator(generator.space, U) if wrap else U
