"""Literal gate unitaries on the truncated space, applied as local tensor contractions.

Every primitive is the exponential of its truncated generator:

* ``NOT``, ``ROT``: diagonal phases in the number basis (exact).
* ``XP`` and general shears ``exp(-i (sum c_n x_n)(sum e_m p_m))``: diagonal in the
  eigenbases of the truncated ``x`` and ``p`` matrices.
* ``BS``, ``BSX``: block diagonal in total photon number, one small eigenproblem per block.
* ``F(sigma)``: rotation by pi/2 after a single-mode squeeze (dense ``d x d``).

States and column blocks are tensors of shape ``space.shape + (k,)``.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable, Mapping

import numpy as np

from ..circuit import DEFAULT_SIGMA, Circuit, MacroRef, Primitive
from ..phase_space import check_primitive
from .space import FockOperator, FockSpace, check_budget, expm_unitary, guard_mask, single_mode_ops


@lru_cache(maxsize=None)
def quadrature_eigs(cutoff: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Eigenvalues/vectors of the truncated ``x`` and ``p``."""
    _, x, p, _ = single_mode_ops(cutoff)
    lx, Vx = np.linalg.eigh(x)
    lp, Vp = np.linalg.eigh(p)
    return lx, Vx, lp, Vp


def _apply_matrix(T: np.ndarray, M: np.ndarray, axis: int) -> np.ndarray:
    return np.moveaxis(np.tensordot(M, T, axes=([1], [axis])), 0, axis)


def _broadcast(values: np.ndarray, axis: int, ndim: int) -> np.ndarray:
    shape = [1] * ndim
    shape[axis] = values.size
    return values.reshape(shape)


def apply_diagonal(T: np.ndarray, phases: np.ndarray, axis: int) -> np.ndarray:
    return T * _broadcast(phases, axis, T.ndim)


def apply_shear(
    T: np.ndarray,
    cutoff: int,
    x_coeffs: Mapping[int, float],
    p_coeffs: Mapping[int, float],
) -> np.ndarray:
    """``exp(-i X P)`` with ``X = sum c x_axis``, ``P = sum e p_axis``; keys are tensor axes."""
    if set(x_coeffs) & set(p_coeffs):
        raise ValueError("shear needs disjoint x and p axes")
    lx, Vx, lp, Vp = quadrature_eigs(cutoff)
    for ax in x_coeffs:
        T = _apply_matrix(T, Vx.conj().T, ax)
    for ax in p_coeffs:
        T = _apply_matrix(T, Vp.conj().T, ax)
    X = sum(c * _broadcast(lx, ax, T.ndim) for ax, c in x_coeffs.items())
    P = sum(e * _broadcast(lp, ax, T.ndim) for ax, e in p_coeffs.items())
    T = T * np.exp(-1j * X * P)
    for ax in x_coeffs:
        T = _apply_matrix(T, Vx, ax)
    for ax in p_coeffs:
        T = _apply_matrix(T, Vp, ax)
    return T


@lru_cache(maxsize=64)
def _two_mode_blocks(kind: str, theta: float, cutoff: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Per-total-number blocks ``(flat indices, unitary)`` of BS / BSX."""
    d = cutoff
    blocks = []
    for N in range(2 * d - 1):
        n1 = np.arange(max(0, N - d + 1), min(N, d - 1) + 1)
        n2 = N - n1
        m = n1.size
        # coupling <n1+1, n2-1| a1^dag a2 |n1, n2>
        hop = np.sqrt((n1[:-1] + 1.0) * n2[:-1])
        if kind == "BS":
            H = np.zeros((m, m), dtype=complex)
            H[np.arange(1, m), np.arange(m - 1)] = -1j * theta * hop
            H[np.arange(m - 1), np.arange(1, m)] = 1j * theta * hop
        else:
            H = np.zeros((m, m), dtype=complex)
            H[np.arange(1, m), np.arange(m - 1)] = theta * hop
            H[np.arange(m - 1), np.arange(1, m)] = theta * hop
        w, V = np.linalg.eigh(H)
        U = (V * np.exp(1j * w)) @ V.conj().T
        blocks.append((n1 * d + n2, U))
    return tuple(blocks)


def apply_two_mode_number_conserving(T: np.ndarray, kind: str, theta: float, cutoff: int, ax1: int, ax2: int) -> np.ndarray:
    T = np.moveaxis(T, (ax1, ax2), (0, 1))
    rest = T.shape[2:]
    flat = T.reshape(cutoff * cutoff, -1)
    out = np.empty_like(flat)
    for idx, U in _two_mode_blocks(kind, float(theta), cutoff):
        out[idx] = U @ flat[idx]
    return np.moveaxis(out.reshape((cutoff, cutoff) + rest), (0, 1), (ax1, ax2))


@lru_cache(maxsize=32)
def fourier_matrix(cutoff: int, sigma: float) -> np.ndarray:
    """Single-mode ``F(sigma)``: squeeze by ``ln(2/sigma^2)`` then rotate by pi/2."""
    rot = np.diag(np.exp(1j * math.pi / 2 * np.arange(cutoff)))
    r = math.log(2.0 / sigma**2)
    if r == 0.0:
        return rot
    a, _, _, _ = single_mode_ops(cutoff)
    a2 = a @ a
    sq = expm_unitary(r / 2 * (a2.conj().T - a2))
    return rot @ sq


def apply_primitive(T: np.ndarray, term: Primitive, cutoff: int, offset: int) -> np.ndarray:
    """Apply one primitive; mode ``m`` lives on tensor axis ``offset + m - 1``."""
    ax = [offset + m - 1 for m in term.modes]
    n = np.arange(cutoff)
    name = term.name
    if name == "NOT":
        return apply_diagonal(T, (-1.0) ** n, ax[0])
    if name == "ROT":
        return apply_diagonal(T, np.exp(1j * term.params[0] * n), ax[0])
    if name == "F":
        sigma = term.params[0] if term.params else DEFAULT_SIGMA
        if sigma == DEFAULT_SIGMA:
            return apply_diagonal(T, np.exp(1j * math.pi / 2 * n), ax[0])
        return _apply_matrix(T, fourier_matrix(cutoff, float(sigma)), ax[0])
    if name == "XP":
        return apply_shear(T, cutoff, {ax[0]: term.params[0]}, {ax[1]: 1.0})
    if name in ("BS", "BSX"):
        return apply_two_mode_number_conserving(T, name, term.params[0], cutoff, ax[0], ax[1])
    raise ValueError(f"unknown primitive {name!r}")


def validate(c: Circuit, space: FockSpace) -> None:
    for t in c.terms:
        if isinstance(t, MacroRef):
            raise ValueError(f"macro {t.name} must be expanded first")
        if isinstance(t, Primitive):
            check_primitive(t, space.n_modes)
        else:
            if not space.n_qubits:
                raise ValueError("conditioned term needs a space with a control qubit")
            for b in t.body.terms:
                if not isinstance(b, Primitive):
                    raise ValueError("conditioned bodies may contain primitives only")
                check_primitive(b, space.n_modes)
    if len(c.qubits()) > 1:
        raise ValueError(f"at most one control qubit is supported, got {sorted(c.qubits())}")


def evolve(c: Circuit, space: FockSpace, T: np.ndarray) -> np.ndarray:
    """Apply an expanded circuit to a tensor of shape ``space.shape + (k,)``."""
    validate(c, space)
    q = space.n_qubits
    for t in c.terms:
        if isinstance(t, Primitive):
            T = apply_primitive(T, t, space.cutoff, q)
        else:
            branch = T[1]
            for b in t.body.terms:
                branch = apply_primitive(branch, b, space.cutoff, 0)
            T = np.stack([T[0], branch])
    return T


def apply_to_vector(c: Circuit, space: FockSpace, amplitudes: np.ndarray) -> np.ndarray:
    T = amplitudes.reshape(space.shape + (1,))
    return evolve(c, space, T).reshape(-1)


def _unit_columns(space: FockSpace, cols: np.ndarray) -> np.ndarray:
    T = np.zeros((space.dim, cols.size), dtype=complex)
    T[cols, np.arange(cols.size)] = 1.0
    return T.reshape(space.shape + (cols.size,))


def circuit_columns(c: Circuit, space: FockSpace, cols: np.ndarray) -> np.ndarray:
    """Columns ``U[:, cols]`` of the circuit unitary, shape ``(dim, len(cols))``."""
    cols = np.asarray(cols)
    check_budget(space.dim, cols.size)
    return evolve(c, space, _unit_columns(space, cols)).reshape(space.dim, cols.size)


def gate_unitary(c: Circuit, space: FockSpace) -> FockOperator:
    """Full dense unitary of an expanded circuit."""
    check_budget(space.dim, space.dim)
    return FockOperator(space, circuit_columns(c, space, np.arange(space.dim)))


def guarded_apply(
    fn: Callable[[np.ndarray], np.ndarray],
    space: FockSpace,
    guard: int,
    chunk_entries: int = 1 << 21,
) -> np.ndarray:
    """``P U P`` on the guarded basis, where ``fn`` applies ``U`` to a column tensor.

    Columns are evaluated in chunks so only ``dim x chunk`` entries are held at once.
    """
    idx = np.flatnonzero(guard_mask(space, guard))
    check_budget(space.dim, idx.size)
    step = max(1, chunk_entries // space.dim)
    out = np.empty((idx.size, idx.size), dtype=complex)
    for s in range(0, idx.size, step):
        cols = idx[s : s + step]
        block = fn(_unit_columns(space, cols)).reshape(space.dim, cols.size)
        out[:, s : s + step] = block[idx]
    return out


def guarded_block(c: Circuit, space: FockSpace, guard: int) -> np.ndarray:
    """Guarded block of an expanded circuit's unitary."""
    validate(c, space)
    return guarded_apply(lambda T: evolve(c, space, T), space, guard)


def guarded_shear_block(space: FockSpace, x_coeffs: Mapping[int, float], p_coeffs: Mapping[int, float], guard: int) -> np.ndarray:
    """Guarded block of ``exp(-i (sum c x_m)(sum e p_m))``; keys are 1-based modes."""
    xa = {space.mode_axis(m): c for m, c in x_coeffs.items()}
    pa = {space.mode_axis(m): e for m, e in p_coeffs.items()}
    return guarded_apply(lambda T: apply_shear(T, space.cutoff, xa, pa), space, guard)
