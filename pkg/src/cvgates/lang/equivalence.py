"""Two-backend circuit equivalence checking."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from ..circuit import Circuit
from ..fock.compare import compare_blocks
from ..fock.kernels import guarded_block
from ..fock.space import FockSpace, guard_mask
from ..phase_space import SYMPLECTIC_TOL, GroupElement, HybridElement, element_of_circuit, equiv
from .macros import expand_macros

EQUAL = "equal"
EQUAL_UP_TO_PHASE = "equal_up_to_phase"
NOT_EQUAL = "not_equal"
REPORTED = "reported"

_RANK = {NOT_EQUAL: 0, EQUAL_UP_TO_PHASE: 1, EQUAL: 2}

# (cutoff, guard) by number of modes, used when the policy leaves them unset
AUTO_TRUNCATION = {1: (40, 24), 2: (64, 16), 3: (12, 8), 4: (8, 4)}


class UniverseError(ValueError):
    """The two circuits do not act on a common mode/qubit universe."""


def meets(status: str, expected: str) -> bool:
    """True when ``status`` is at least as strong as ``expected``.

    ``not_equal`` as an expectation means the circuits must differ, and ``reported``
    accepts anything.
    """
    if expected == REPORTED:
        return True
    if expected == NOT_EQUAL:
        return status == NOT_EQUAL
    return _RANK.get(status, -1) >= _RANK[expected]


@dataclass(frozen=True)
class EquivalencePolicy:
    backend: str = "both"
    strict_phase: bool = False
    cutoff: Optional[int] = None
    guard: Optional[int] = None
    tol_symplectic: float = SYMPLECTIC_TOL
    tol_fock: float = 1e-8
    branchwise: bool = True
    n_modes: Optional[int] = None

    def __post_init__(self):
        if self.backend not in ("symplectic", "fock", "both"):
            raise ValueError(f"backend must be symplectic, fock or both, got {self.backend!r}")
        if self.tol_symplectic <= 0 or self.tol_fock <= 0:
            raise ValueError("tolerances must be positive")
        if self.cutoff is not None and self.guard is not None and not 0 <= self.guard < self.cutoff:
            raise ValueError(f"need 0 <= guard < cutoff, got guard {self.guard}, cutoff {self.cutoff}")

    def truncation(self, n_modes: int) -> tuple[int, int]:
        auto = AUTO_TRUNCATION.get(n_modes, (6, 3))
        cutoff = self.cutoff if self.cutoff is not None else auto[0]
        guard = self.guard if self.guard is not None else min(auto[1], cutoff - 1)
        if not 0 <= guard < cutoff:
            raise ValueError(f"need 0 <= guard < cutoff, got guard {guard}, cutoff {cutoff}")
        return cutoff, guard


@dataclass
class VerificationCheck:
    """One check result; ``phase`` is a list of ``[re, im]`` pairs when recorded."""

    name: str
    anchor: str
    backend: str
    status: str
    max_error: float
    tol: float
    phase: Optional[list] = None
    ms: float = 0.0
    expected: str = EQUAL
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return meets(self.status, self.expected)

    def to_json(self) -> dict[str, Any]:
        out = {
            "name": self.name,
            "anchor": self.anchor,
            "backend": self.backend,
            "status": self.status,
            "expected": self.expected,
            "passed": self.passed,
            "max_error": self.max_error,
            "tol": self.tol,
        }
        if self.phase is not None:
            out["phase"] = self.phase
        out["ms"] = round(self.ms, 3)
        if self.details:
            out["details"] = self.details
        return out


def _universe(c1: Circuit, c2: Circuit, n_modes: Optional[int]) -> tuple[int, bool]:
    q1, q2 = c1.qubits(), c2.qubits()
    if len(q1) > 1 or len(q2) > 1:
        raise UniverseError("at most one control qubit is supported")
    if q1 and q2 and q1 != q2:
        raise UniverseError(f"circuits use different control qubits {sorted(q1)} and {sorted(q2)}")
    used = max(c1.max_mode(), c2.max_mode())
    if n_modes is not None and used > n_modes:
        raise UniverseError(f"circuits reference mode {used} but the universe has {n_modes} modes")
    n = n_modes or used
    if n < 1:
        raise UniverseError("circuits act on no modes")
    return n, bool(q1 or q2)


def _phase_list(phase) -> list:
    phases = phase if isinstance(phase, tuple) else (phase,)
    return [[float(np.real(p)), float(np.imag(p))] for p in phases]


def check_equivalence(c1: Circuit, c2: Circuit, policy: EquivalencePolicy = EquivalencePolicy(), name: str = "") -> VerificationCheck:
    """Compare two circuits symplectically and/or on the guarded truncated space.

    Status is ``equal`` only when the Fock comparison holds with phase 1; a
    symplectic-only match cannot see global phase and reports ``equal_up_to_phase``.
    """
    t0 = time.perf_counter()
    e1, e2 = expand_macros(c1), expand_macros(c2)
    n_modes, hybrid = _universe(e1, e2, policy.n_modes)
    details: dict[str, Any] = {"n_modes": n_modes, "hybrid": hybrid}
    status_rank = _RANK[EQUAL]
    errors = []
    phase = None
    tol = policy.tol_fock

    if policy.backend in ("symplectic", "both"):
        g1, g2 = element_of_circuit(e1, n_modes), element_of_circuit(e2, n_modes)
        ok, err = equiv(g1, g2, policy.tol_symplectic)
        details["symplectic_error"] = err
        errors.append(err)
        # phase is invisible here; only the Fock comparison can certify strict equality
        sym_rank = (_RANK[EQUAL] if policy.backend == "both" else _RANK[EQUAL_UP_TO_PHASE]) if ok else _RANK[NOT_EQUAL]
        status_rank = min(status_rank, sym_rank)
        if policy.backend == "symplectic":
            tol = policy.tol_symplectic

    if policy.backend in ("fock", "both"):
        cutoff, guard = policy.truncation(n_modes)
        space = FockSpace(n_modes, cutoff, 1 if hybrid else 0)
        A = guarded_block(e1, space, guard)
        B = guarded_block(e2, space, guard)
        branches = None
        if hybrid and policy.branchwise:
            branches = space.qubit_values()[guard_mask(space, guard)]
        cmp = compare_blocks(A, B, policy.tol_fock, branches)
        details.update(cutoff=cutoff, guard=guard, fock_error=cmp.error, fock_strict_error=cmp.strict_error)
        phase = _phase_list(cmp.phase)
        if cmp.strict_equal:
            fock_rank = _RANK[EQUAL]
        elif cmp.equal and not policy.strict_phase:
            fock_rank = _RANK[EQUAL_UP_TO_PHASE]
        else:
            fock_rank = _RANK[NOT_EQUAL]
        status_rank = min(status_rank, fock_rank)
        errors.append(cmp.strict_error if fock_rank == _RANK[EQUAL] else cmp.error)

    status = {v: k for k, v in _RANK.items()}[status_rank]
    return VerificationCheck(
        name=name,
        anchor="",
        backend=policy.backend,
        status=status,
        max_error=float(max(errors)),
        tol=tol,
        phase=phase,
        ms=(time.perf_counter() - t0) * 1e3,
        details=details,
    )


def element(c: Circuit, n_modes: Optional[int] = None) -> GroupElement | HybridElement:
    """Phase-space element of a circuit, expanding macros first."""
    return element_of_circuit(expand_macros(c), n_modes)
