"""Guarded, phase-aware comparisons of truncated unitaries."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..circuit import Circuit, prim
from .kernels import guarded_block, guarded_shear_block
from .space import FockOperator, FockSpace, expm_unitary, guard_mask, single_mode_ops


@dataclass(frozen=True)
class PhaseComparison:
    equal: bool
    strict_equal: bool
    phase: complex | tuple[complex, ...]
    error: float
    strict_error: float


def _best_phase(A: np.ndarray, B: np.ndarray) -> complex:
    # unit lambda maximizing Re <lambda B, A> (Frobenius-optimal)
    ip = np.vdot(B, A)
    if abs(ip) < 1e-300:
        return 1.0 + 0j
    return ip / abs(ip)


def compare_blocks(A: np.ndarray, B: np.ndarray, tol: float, branches: np.ndarray | None = None) -> PhaseComparison:
    """Compare guarded blocks strictly and up to a unit phase.

    With ``branches`` (the qubit value of each guarded index), each diagonal qubit
    block gets its own phase and off-diagonal qubit blocks are compared strictly.
    """
    if A.shape != B.shape:
        raise ValueError("blocks differ in shape")
    if not np.any(A) and not np.any(B):
        raise ValueError("guarded blocks are identically zero")
    strict = float(np.max(np.abs(A - B), initial=0.0))
    if branches is None:
        lam = _best_phase(A, B)
        err = float(np.max(np.abs(A - lam * B), initial=0.0))
        phase: complex | tuple[complex, ...] = complex(lam)
    else:
        phases = []
        err = 0.0
        for q in (0, 1):
            rows = branches == q
            for q2 in (0, 1):
                cols = branches == q2
                a, b = A[np.ix_(rows, cols)], B[np.ix_(rows, cols)]
                if a.size == 0:
                    continue
                if q == q2:
                    lam = _best_phase(a, b)
                    phases.append(complex(lam))
                    err = max(err, float(np.max(np.abs(a - lam * b))))
                else:
                    err = max(err, float(np.max(np.abs(a - b))))
        phase = tuple(phases)
    return PhaseComparison(err <= tol, strict <= tol, phase, err, strict)


def equiv_up_to_phase(U: FockOperator, V: FockOperator, guard: FockOperator, tol: float, branchwise: bool = False) -> PhaseComparison:
    """Compare ``guard U guard`` with ``lambda guard V guard`` for the best unit ``lambda``."""
    if U.space != V.space or guard.space != U.space:
        raise ValueError("operators live on different spaces")
    idx = np.flatnonzero(np.abs(np.diag(guard.matrix)) > 0.5)
    A, B = U.matrix[np.ix_(idx, idx)], V.matrix[np.ix_(idx, idx)]
    branches = U.space.qubit_values()[idx] if branchwise and U.space.n_qubits else None
    return compare_blocks(A, B, tol, branches)


def hermiticity_defect(block: np.ndarray) -> float:
    """``max |P (U - U^dag) P|`` from a guarded block."""
    return float(np.max(np.abs(block - block.conj().T)))


def guarded_unitarity_defect(columns: np.ndarray, guard_idx: np.ndarray) -> float:
    """``max |P U^dag U P - I|`` from full columns ``U[:, guard]``."""
    gram = columns.conj().T @ columns
    return float(np.max(np.abs(gram - np.eye(guard_idx.size))))


@dataclass(frozen=True)
class CommutatorResult:
    residual: float
    commutator_norm: float
    swapped_residual: float


def matrix_commutator_check(cutoff: int = 20, guard: int = 10) -> CommutatorResult:
    """Guarded ``[CN-_31, CN-_21] - (E1 - E2)`` with ``E1 = e^{i(x2-x3)p1}``, ``E2 = e^{i(x3-x2)p1}``.

    Also returns the guarded norm of the commutator itself and the residual with
    ``E1`` and ``E2`` exchanged (sign control).  Norms are max-abs entries.
    """
    if cutoff < 12:
        raise ValueError("commutator check needs cutoff >= 12")
    space = FockSpace(3, cutoff)
    cnm31 = [prim("XP", 3, 1, -1), prim("NOT", 1)]
    cnm21 = [prim("XP", 2, 1, -1), prim("NOT", 1)]
    # operator product A B: B acts first
    AB = guarded_block(Circuit(tuple(cnm21 + cnm31)), space, guard)
    BA = guarded_block(Circuit(tuple(cnm31 + cnm21)), space, guard)
    comm = AB - BA
    del AB, BA
    # e^{i(x2 - x3) p1} = exp(-i (x3 - x2) p1)
    E1 = guarded_shear_block(space, {2: -1.0, 3: 1.0}, {1: 1.0}, guard)
    E2 = guarded_shear_block(space, {2: 1.0, 3: -1.0}, {1: 1.0}, guard)
    diff = E1 - E2
    return CommutatorResult(
        residual=float(np.max(np.abs(comm - diff))),
        commutator_norm=float(np.max(np.abs(comm))),
        swapped_residual=float(np.max(np.abs(comm + diff))),
    )


@dataclass(frozen=True)
class BraidingResult:
    theta: float
    x: float
    p: float
    expected_phase: complex
    strict_error: float
    phase_error: float
    fitted_phase: complex


def braiding_product(cutoff: int, x: float, p: float, theta: float) -> np.ndarray:
    """``R e^{ix p} R^dag e^{ip x} R e^{-ix p} R^dag e^{-ip x}`` with ``R = e^{i(pi/2 - theta) n}``.

    ``x``, ``p`` are c-numbers multiplying the truncated quadrature operators.
    """
    _, X, P, N = single_mode_ops(cutoff)
    R = np.diag(np.exp(1j * (math.pi / 2 - theta) * np.diag(N).real))
    Dx = expm_unitary(1j * x * P)
    Dp = expm_unitary(1j * p * X)
    Rd, Dxd, Dpd = R.conj().T, Dx.conj().T, Dp.conj().T
    return R @ Dx @ Rd @ Dp @ R @ Dxd @ Rd @ Dpd


def braiding_check(cutoff: int, guard: int, x: float, p: float, theta: float) -> BraidingResult:
    """Compare the eight-factor product to ``e^{i x p sin(theta)} I`` on the guard."""
    M = braiding_product(cutoff, x, p, theta)[: guard + 1, : guard + 1]
    expected = cmath.exp(1j * x * p * math.sin(theta))
    I = np.eye(guard + 1)
    strict = float(np.max(np.abs(M - expected * I)))
    lam = _best_phase(M, I)
    return BraidingResult(theta, x, p, expected, strict, float(np.max(np.abs(M - lam * I))), complex(lam))


def guard_indices(space: FockSpace, guard: int) -> np.ndarray:
    return np.flatnonzero(guard_mask(space, guard))
