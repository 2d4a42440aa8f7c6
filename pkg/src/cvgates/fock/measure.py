"""Applying gates to states, moments of quadrature forms, fidelity and qubit measurement."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..circuit import Circuit
from ..phase_space import QuadForm
from .kernels import _apply_matrix, apply_to_vector
from .space import FockOperator, FockSpace, FockStateVec, single_mode_ops


def apply(U: FockOperator | Circuit, psi: FockStateVec, renormalize: bool = False) -> FockStateVec:
    """``U psi`` for a dense operator or an expanded circuit."""
    if isinstance(U, Circuit):
        out = apply_to_vector(U, psi.space, psi.amplitudes)
    else:
        if U.space != psi.space:
            raise ValueError("operator and state live on different spaces")
        out = U.matrix @ psi.amplitudes
    res = FockStateVec(psi.space, out)
    return res.normalized() if renormalize else res


def _apply_form(f: QuadForm, psi: FockStateVec) -> np.ndarray:
    space = psi.space
    if f.n_modes != space.n_modes:
        raise ValueError(f"form has {f.n_modes} modes, space has {space.n_modes}")
    _, x, p, _ = single_mode_ops(space.cutoff)
    T = psi.tensor()
    out = f.constant * T
    for k, c in enumerate(f.coeffs):
        if c == 0.0:
            continue
        mode, quad = k // 2 + 1, (x, p)[k % 2]
        out = out + c * _apply_matrix(T, quad, space.mode_axis(mode))
    return out.reshape(-1)


def expectation(f: QuadForm | FockOperator, psi: FockStateVec) -> complex | float:
    if isinstance(f, QuadForm):
        return float(np.real(np.vdot(psi.amplitudes, _apply_form(f, psi))))
    if f.space != psi.space:
        raise ValueError("operator and state live on different spaces")
    return complex(np.vdot(psi.amplitudes, f.matrix @ psi.amplitudes))


def variance(f: QuadForm | FockOperator, psi: FockStateVec) -> float:
    """``<F^2> - <F>^2``, with ``<F^2> = ||F psi||^2`` for Hermitian ``F``."""
    if isinstance(f, QuadForm):
        phi = _apply_form(f, psi)
    else:
        phi = f.matrix @ psi.amplitudes
    mean = np.vdot(psi.amplitudes, phi)
    return float(np.real(np.vdot(phi, phi)) - abs(mean) ** 2)


def fidelity(psi: FockStateVec, phi: FockStateVec) -> float:
    if psi.space != phi.space:
        raise ValueError("states live on different spaces")
    return float(abs(np.vdot(psi.amplitudes, phi.amplitudes)) ** 2)


@dataclass(frozen=True)
class MeasurementOutcome:
    """One qubit outcome.  ``collapsed`` is the normalized bosonic state, or ``None`` if impossible."""

    label: str
    probability: float
    collapsed: Optional[FockStateVec]

    @property
    def possible(self) -> bool:
        return self.collapsed is not None


def measure_qubit(psi: FockStateVec, basis: str = "pm") -> tuple[MeasurementOutcome, MeasurementOutcome]:
    """Projective measurement of the control qubit in the computational ('z') or ``|+/->`` ('pm') basis.

    The collapsed states live on the mode-only space (qubit traced out after projection).
    """
    space = psi.space
    if space.n_qubits != 1:
        raise ValueError("state has no qubit to measure")
    v0, v1 = psi.amplitudes.reshape(2, -1)
    if basis in ("pm", "+-", "±"):
        branches = [("+", (v0 + v1) / math.sqrt(2)), ("-", (v0 - v1) / math.sqrt(2))]
    elif basis in ("z", "computational"):
        branches = [("0", v0), ("1", v1)]
    else:
        raise ValueError(f"unknown basis {basis!r}")
    mode_space = FockSpace(space.n_modes, space.cutoff)
    total = float(np.vdot(psi.amplitudes, psi.amplitudes).real)
    outcomes = []
    for label, v in branches:
        nrm = float(np.linalg.norm(v))
        if nrm < 1e-12:
            outcomes.append(MeasurementOutcome(label, 0.0, None))
        else:
            outcomes.append(MeasurementOutcome(label, nrm**2 / total, FockStateVec(mode_space, v / nrm)))
    return outcomes[0], outcomes[1]
