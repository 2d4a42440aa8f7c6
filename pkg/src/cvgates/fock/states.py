"""State preparation on the truncated space.

Single-mode amplitude builders return length-``cutoff`` vectors and raise
:class:`TruncationError` when more than ``leak_tol`` of the norm falls outside the
truncation.  Full-space helpers tensor them together with the qubit (first factor).
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy.special import gammaln

from .space import FockSpace, FockStateVec, TruncationError

LEAK_TOL = 1e-8


def hermite_functions(n_max: int, x: np.ndarray) -> np.ndarray:
    """Rows ``psi_0..psi_{n_max-1}`` of the oscillator eigenfunctions ``<x|n>`` on the grid ``x``."""
    x = np.asarray(x, dtype=float)
    out = np.zeros((n_max, x.size))
    out[0] = math.pi**-0.25 * np.exp(-(x**2) / 2)
    if n_max > 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for n in range(1, n_max - 1):
        out[n + 1] = math.sqrt(2.0 / (n + 1)) * x * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out


def _check_leak(captured: float, leak_tol: float, what: str) -> None:
    leak = 1.0 - captured
    if leak > leak_tol:
        raise TruncationError(f"{what}: {leak:.3e} of the norm lies above the cutoff (tolerance {leak_tol:g})")


def coherent_amplitudes(cutoff: int, alpha: complex, leak_tol: float = LEAK_TOL) -> np.ndarray:
    n = np.arange(cutoff)
    alpha = complex(alpha)
    if alpha == 0:
        out = np.zeros(cutoff, dtype=complex)
        out[0] = 1.0
        return out
    log_mag = -abs(alpha) ** 2 / 2 + n * math.log(abs(alpha)) - 0.5 * gammaln(n + 1)
    amps = np.exp(log_mag) * np.exp(1j * n * np.angle(alpha))
    captured = float(np.sum(np.abs(amps) ** 2))
    _check_leak(captured, leak_tol, f"coherent state alpha={alpha}")
    return amps / math.sqrt(captured)


def gaussian_amplitudes(
    cutoff: int,
    x0: float = 0.0,
    p0: float = 0.0,
    var_x: float = 0.5,
    leak_tol: float = LEAK_TOL,
) -> np.ndarray:
    """Minimum-uncertainty Gaussian with ``<x> = x0``, ``<p> = p0``, ``Var(x) = var_x``.

    Amplitudes are overlaps with the Hermite functions, computed by trapezoidal
    quadrature (spectrally accurate for these smooth, rapidly decaying integrands).
    """
    if var_x <= 0:
        raise ValueError("variance must be positive")
    s = math.sqrt(var_x)
    half_width = max(math.sqrt(2 * cutoff + 1) + 12.0, abs(x0) + 12.0 * s)
    half_width = min(half_width, 37.0 + abs(x0))
    kmax = max(math.sqrt(2 * cutoff + 1), abs(p0) + 12.0 * math.sqrt(0.25 / var_x))
    h = min(0.05, 0.25 * s, math.pi / (3 * kmax))
    grid = np.arange(-half_width, half_width + h / 2, h)
    psi = (2 * math.pi * var_x) ** -0.25 * np.exp(-((grid - x0) ** 2) / (4 * var_x) + 1j * p0 * grid)
    amps = h * (hermite_functions(cutoff, grid) @ psi)
    captured = float(np.sum(np.abs(amps) ** 2))
    _check_leak(captured, leak_tol, f"Gaussian state (x0={x0}, p0={p0}, Var x={var_x:g})")
    return amps / math.sqrt(captured)


def squeezed_vacuum_amplitudes(cutoff: int, r: float, leak_tol: float = LEAK_TOL) -> np.ndarray:
    """Position-squeezed vacuum, ``Var(x) = e^{-2r}/2`` (``r < 0`` squeezes momentum)."""
    k = np.arange((cutoff + 1) // 2)
    t = math.tanh(abs(r))
    log_mag = 0.5 * gammaln(2 * k + 1) - k * math.log(2) - gammaln(k + 1) - 0.5 * math.log(math.cosh(r))
    if t > 0:
        log_mag = log_mag + k * math.log(t)
    else:
        log_mag = np.where(k == 0, log_mag, -np.inf)
    sign = (-1.0) ** k if r > 0 else np.ones_like(log_mag)
    amps = np.zeros(cutoff, dtype=complex)
    amps[2 * k] = sign * np.exp(log_mag)
    captured = float(np.sum(np.abs(amps) ** 2))
    _check_leak(captured, leak_tol, f"squeezed vacuum r={r}")
    return amps / math.sqrt(captured)


def position_approx_amplitudes(cutoff: int, x0: float, r: float, leak_tol: float = LEAK_TOL) -> np.ndarray:
    """Approximate ``|x = x0>``: ``<x> = x0``, ``Var(x) = e^{-2r}/2``."""
    if r < 0:
        raise ValueError("squeezing r must be >= 0")
    return gaussian_amplitudes(cutoff, x0=x0, var_x=math.exp(-2 * r) / 2, leak_tol=leak_tol)


def momentum_approx_amplitudes(cutoff: int, p0: float, r: float, leak_tol: float = LEAK_TOL) -> np.ndarray:
    """Approximate ``|p = p0>``: ``<p> = p0``, ``Var(p) = e^{-2r}/2``."""
    if r < 0:
        raise ValueError("squeezing r must be >= 0")
    return gaussian_amplitudes(cutoff, p0=p0, var_x=math.exp(2 * r) / 2, leak_tol=leak_tol)


def cat_amplitudes(cutoff: int, alpha: complex, parity: int, leak_tol: float = LEAK_TOL) -> np.ndarray:
    """Normalized ``|alpha> + parity |-alpha>`` from analytic amplitudes (even or odd ``n`` only)."""
    if parity not in (1, -1):
        raise ValueError("parity must be +1 (even cat) or -1 (odd cat)")
    alpha = complex(alpha)
    a2 = abs(alpha) ** 2
    norm_sq = 2 * (1 + parity * math.exp(-2 * a2))
    if norm_sq < 1e-24:
        raise ValueError("cat state has zero norm (odd cat at alpha = 0)")
    n = np.arange(cutoff)
    keep = (n % 2 == 0) if parity == 1 else (n % 2 == 1)
    if alpha == 0:
        amps = np.where(n == 0, 2.0, 0.0).astype(complex)
    else:
        log_mag = -a2 / 2 + n * math.log(abs(alpha)) - 0.5 * gammaln(n + 1)
        amps = np.where(keep, 2 * np.exp(log_mag) * np.exp(1j * n * np.angle(alpha)), 0.0)
    captured = float(np.sum(np.abs(amps) ** 2)) / norm_sq
    _check_leak(captured, leak_tol, f"cat state alpha={alpha}")
    return amps / np.linalg.norm(amps)


def product_state(space: FockSpace, modes: Sequence[np.ndarray], qubit: Sequence[complex] | int | None = None) -> FockStateVec:
    """Tensor product of single-mode vectors and, when the space has one, the qubit.

    ``qubit`` is a two-component vector or a basis label 0/1; the default is ``|0>``.
    """
    if len(modes) != space.n_modes:
        raise ValueError(f"need {space.n_modes} mode vectors, got {len(modes)}")
    out = np.ones(1, dtype=complex)
    if space.n_qubits:
        if qubit is None or isinstance(qubit, (int, np.integer)):
            q = np.eye(2, dtype=complex)[qubit or 0]
        else:
            q = np.array(qubit, dtype=complex)
        out = q / np.linalg.norm(q)
    elif qubit is not None:
        raise ValueError("space has no qubit")
    for v in modes:
        if v.shape != (space.cutoff,):
            raise ValueError("mode vector length must equal the cutoff")
        out = np.kron(out, v)
    return FockStateVec(space, out)


def _vacuum(cutoff: int) -> np.ndarray:
    v = np.zeros(cutoff, dtype=complex)
    v[0] = 1.0
    return v


def _single(space: FockSpace, mode: int, amps: np.ndarray, qubit=None) -> FockStateVec:
    modes = [_vacuum(space.cutoff) for _ in range(space.n_modes)]
    modes[space.mode_axis(mode) - space.n_qubits] = amps
    return product_state(space, modes, qubit)


def fock_state(space: FockSpace, ns: Sequence[int], qubit: int | None = None) -> FockStateVec:
    v = np.zeros(space.dim, dtype=complex)
    v[space.index(tuple(ns), qubit if space.n_qubits else None)] = 1.0
    return FockStateVec(space, v)


def coherent_state(space: FockSpace, mode: int, alpha: complex, qubit=None, leak_tol: float = LEAK_TOL) -> FockStateVec:
    """``|alpha>`` on ``mode``, vacuum elsewhere."""
    return _single(space, mode, coherent_amplitudes(space.cutoff, alpha, leak_tol), qubit)


def squeezed_vacuum(space: FockSpace, mode: int, r: float, qubit=None, leak_tol: float = LEAK_TOL) -> FockStateVec:
    return _single(space, mode, squeezed_vacuum_amplitudes(space.cutoff, r, leak_tol), qubit)


def position_approx(space: FockSpace, mode: int, x0: float, r: float, qubit=None, leak_tol: float = LEAK_TOL) -> FockStateVec:
    return _single(space, mode, position_approx_amplitudes(space.cutoff, x0, r, leak_tol), qubit)


def momentum_approx(space: FockSpace, mode: int, p0: float, r: float, qubit=None, leak_tol: float = LEAK_TOL) -> FockStateVec:
    return _single(space, mode, momentum_approx_amplitudes(space.cutoff, p0, r, leak_tol), qubit)


def analytic_cat(space: FockSpace, mode: int, alpha: complex, parity: int, qubit=None, leak_tol: float = LEAK_TOL) -> FockStateVec:
    return _single(space, mode, cat_amplitudes(space.cutoff, alpha, parity, leak_tol), qubit)
