"""Exact phase-space representation of Gaussian unitaries.

Quadratures are ordered ``(x1, p1, x2, p2, ..., xN, pN)`` with ``x = (a + a^dag)/sqrt(2)``,
``p = (a - a^dag)/(i sqrt(2))`` and ``[x, p] = i``.

A :class:`GroupElement` stores the Heisenberg action of a unitary ``U``::

    U^dag xi_k U = sum_j S[k, j] xi_j + d[k]

Row ``k`` of ``S`` is the image of quadrature ``k``.  Acting on a joint eigenstate of
the quadratures with eigenvalue vector ``v``, ``U`` produces an eigenstate with
eigenvalues ``S @ v + d``.  Global phases are not tracked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np

from .circuit import DEFAULT_SIGMA, PRIMITIVES, Circuit, MacroRef, Primitive

SYMPLECTIC_TOL = 1e-12


class ModeMismatchError(ValueError):
    pass


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal ``J`` with 2x2 blocks ``[[0, 1], [-1, 0]]``."""
    J = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        J[2 * k, 2 * k + 1] = 1.0
        J[2 * k + 1, 2 * k] = -1.0
    return J


def xi(mode: int, quad: str) -> int:
    """Index of quadrature ``quad`` ('x' or 'p') of the 1-based ``mode``."""
    if mode < 1:
        raise ValueError(f"mode index must be >= 1, got {mode}")
    return 2 * (mode - 1) + (0 if quad == "x" else 1)


@dataclass(frozen=True, eq=False)
class GroupElement:
    n_modes: int
    S: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        S = np.asarray(self.S, dtype=float)
        d = np.asarray(self.d, dtype=float)
        if S.shape != (2 * self.n_modes, 2 * self.n_modes) or d.shape != (2 * self.n_modes,):
            raise ValueError("S must be 2N x 2N and d of length 2N")
        S.setflags(write=False)
        d.setflags(write=False)
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "d", d)

    @classmethod
    def identity(cls, n_modes: int) -> "GroupElement":
        return cls(n_modes, np.eye(2 * n_modes), np.zeros(2 * n_modes))

    def symplectic_defect(self) -> float:
        J = symplectic_form(self.n_modes)
        return float(np.max(np.abs(self.S.T @ J @ self.S - J)))

    def is_symplectic(self, tol: float = SYMPLECTIC_TOL) -> bool:
        return self.symplectic_defect() <= tol

    def position_block(self) -> np.ndarray:
        """Action on position eigenvalues, valid when positions map to positions only."""
        return self.S[0::2, 0::2].copy()

    def momentum_block(self) -> np.ndarray:
        return self.S[1::2, 1::2].copy()

    def __repr__(self) -> str:
        return f"GroupElement(n_modes={self.n_modes},\nS=\n{self.S},\nd={self.d})"


@dataclass(frozen=True, eq=False)
class HybridElement:
    """Qubit-controlled pair of Gaussian elements: ``P0 (x) U0 + P1 (x) U1``.

    ``control`` is ``None`` for an element lifted from an unconditioned gate.
    """

    branch0: GroupElement
    branch1: GroupElement
    control: Optional[int] = None

    def __post_init__(self):
        if self.branch0.n_modes != self.branch1.n_modes:
            raise ModeMismatchError("hybrid branches must have the same mode count")

    @property
    def n_modes(self) -> int:
        return self.branch0.n_modes

    @classmethod
    def lift(cls, g: GroupElement, control: Optional[int] = None) -> "HybridElement":
        return cls(g, g, control)

    def symplectic_defect(self) -> float:
        return max(self.branch0.symplectic_defect(), self.branch1.symplectic_defect())


Element = Union[GroupElement, HybridElement]


@dataclass(frozen=True, eq=False)
class QuadForm:
    """Linear quadrature combination ``coeffs . xi + constant``."""

    coeffs: np.ndarray
    constant: float = 0.0

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim != 1 or c.size % 2:
            raise ValueError("coeffs must be a vector of even length 2N")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def n_modes(self) -> int:
        return self.coeffs.size // 2

    @classmethod
    def from_terms(cls, n_modes: int, terms: dict[str, float], constant: float = 0.0) -> "QuadForm":
        """``QuadForm.from_terms(2, {'x1': 1, 'x2': -1})`` is ``x1 - x2``."""
        c = np.zeros(2 * n_modes)
        for key, value in terms.items():
            c[xi(int(key[1:]), key[0])] += value
        return cls(c, constant)


def _primitive_S(name: str, modes: tuple[int, ...], params: tuple[float, ...], n_modes: int) -> np.ndarray:
    S = np.eye(2 * n_modes)
    if name == "NOT":
        (i,) = modes
        S[xi(i, "x"), xi(i, "x")] = -1.0
        S[xi(i, "p"), xi(i, "p")] = -1.0
    elif name == "ROT":
        # e^{i theta n}: x -> cos x - sin p, p -> sin x + cos p
        (i,) = modes
        c, s = math.cos(params[0]), math.sin(params[0])
        xa, pa = xi(i, "x"), xi(i, "p")
        S[np.ix_([xa, pa], [xa, pa])] = [[c, -s], [s, c]]
    elif name == "F":
        # F(sigma)|x> ~ |p = 2x/sigma^2>
        (i,) = modes
        sigma = params[0] if params else DEFAULT_SIGMA
        xa, pa = xi(i, "x"), xi(i, "p")
        S[np.ix_([xa, pa], [xa, pa])] = [[0.0, -sigma**2 / 2], [2 / sigma**2, 0.0]]
    elif name == "XP":
        # e^{-i s x_i p_j}: x_j -> x_j + s x_i, p_i -> p_i - s p_j
        i, j = modes
        s = params[0]
        S[xi(j, "x"), xi(i, "x")] = s
        S[xi(i, "p"), xi(j, "p")] = -s
    elif name == "BS":
        # e^{theta (a_i^dag a_j - a_j^dag a_i)}: a_i -> c a_i + s a_j, a_j -> c a_j - s a_i
        i, j = modes
        c, s = math.cos(params[0]), math.sin(params[0])
        for q in "xp":
            a, b = xi(i, q), xi(j, q)
            S[np.ix_([a, b], [a, b])] = [[c, s], [-s, c]]
    elif name == "BSX":
        # e^{i theta (a_i^dag a_j + a_j^dag a_i)}: a_i -> c a_i + i s a_j
        i, j = modes
        c, s = math.cos(params[0]), math.sin(params[0])
        idx = [xi(i, "x"), xi(i, "p"), xi(j, "x"), xi(j, "p")]
        S[np.ix_(idx, idx)] = [
            [c, 0.0, 0.0, -s],
            [0.0, c, s, 0.0],
            [0.0, -s, c, 0.0],
            [s, 0.0, 0.0, c],
        ]
    else:
        raise ValueError(f"unknown primitive {name!r}")
    return S


def check_primitive(term: Primitive, n_modes: int) -> None:
    if term.name not in PRIMITIVES:
        raise ValueError(f"unknown primitive {term.name!r}")
    n_mode_args, n_req, n_opt = PRIMITIVES[term.name]
    if len(term.modes) != n_mode_args:
        raise ValueError(f"{term.name} takes {n_mode_args} mode argument(s), got {len(term.modes)}")
    if not n_req <= len(term.params) <= n_req + n_opt:
        raise ValueError(f"{term.name} takes {n_req}..{n_req + n_opt} parameter(s), got {len(term.params)}")
    for m in term.modes:
        if not 1 <= m <= n_modes:
            raise ValueError(f"mode {m} out of range 1..{n_modes} in {term.name}")
    if len(set(term.modes)) != len(term.modes):
        raise ValueError(f"{term.name} needs distinct modes, got {term.modes}")
    if term.name == "F" and term.params and term.params[0] <= 0:
        raise ValueError("F scale sigma must be positive")


def element_of_gate(term: Primitive, n_modes: int) -> GroupElement:
    """Symplectic element of a primitive gate on ``n_modes`` modes (``d = 0``)."""
    check_primitive(term, n_modes)
    return GroupElement(n_modes, _primitive_S(term.name, term.modes, term.params, n_modes), np.zeros(2 * n_modes))


def displacement_element(n_modes: int, mode: int, x: float = 0.0, p: float = 0.0) -> GroupElement:
    """Element of ``e^{i x p_hat} e^{i p x_hat}`` on ``mode`` (c-number shifts)."""
    d = np.zeros(2 * n_modes)
    d[xi(mode, "x")] = -x
    d[xi(mode, "p")] = p
    return GroupElement(n_modes, np.eye(2 * n_modes), d)


def compose(a: GroupElement, b: GroupElement) -> GroupElement:
    """Element of ``U_b U_a``: ``a`` acts first, then ``b``."""
    if a.n_modes != b.n_modes:
        raise ModeMismatchError(f"mode count mismatch: {a.n_modes} vs {b.n_modes}")
    return GroupElement(a.n_modes, b.S @ a.S, b.S @ a.d + b.d)


def compose_all(elements: Iterable[GroupElement], n_modes: int) -> GroupElement:
    g = GroupElement.identity(n_modes)
    for e in elements:
        g = compose(g, e)
    return g


def inverse(g: GroupElement) -> GroupElement:
    # S^{-1} = -J S^T J for symplectic S
    J = symplectic_form(g.n_modes)
    S_inv = -J @ g.S.T @ J
    return GroupElement(g.n_modes, S_inv, -S_inv @ g.d)


def heisenberg_map(g: GroupElement, f: QuadForm) -> QuadForm:
    """``U^dag (f.xi + c) U`` as a new quadrature form."""
    if f.n_modes != g.n_modes:
        raise ModeMismatchError(f"form has {f.n_modes} modes, element has {g.n_modes}")
    return QuadForm(g.S.T @ f.coeffs, float(f.constant + f.coeffs @ g.d))


def _as_hybrid(e: Element) -> HybridElement:
    return e if isinstance(e, HybridElement) else HybridElement.lift(e)


def hybrid_compose(a: Element, b: Element) -> HybridElement:
    """Branch-wise composition; plain elements are lifted to both branches."""
    a, b = _as_hybrid(a), _as_hybrid(b)
    if a.control is not None and b.control is not None and a.control != b.control:
        raise ModeMismatchError(f"control qubit mismatch: {a.control} vs {b.control}")
    control = a.control if a.control is not None else b.control
    return HybridElement(compose(a.branch0, b.branch0), compose(a.branch1, b.branch1), control)


def equiv(a: Element, b: Element, tol: float = SYMPLECTIC_TOL) -> tuple[bool, float]:
    """Entry-wise comparison of ``S`` and ``d``; branch-wise when either side is hybrid."""
    if isinstance(a, HybridElement) or isinstance(b, HybridElement):
        a, b = _as_hybrid(a), _as_hybrid(b)
        pairs = [(a.branch0, b.branch0), (a.branch1, b.branch1)]
    else:
        pairs = [(a, b)]
    err = 0.0
    for g, h in pairs:
        if g.n_modes != h.n_modes:
            raise ModeMismatchError(f"mode count mismatch: {g.n_modes} vs {h.n_modes}")
        err = max(err, float(np.max(np.abs(g.S - h.S))), float(np.max(np.abs(g.d - h.d), initial=0.0)))
    return err <= tol, err


def element_of_circuit(c: Circuit, n_modes: Optional[int] = None) -> Element:
    """Compose an expanded circuit.  Returns a hybrid element iff the circuit is conditioned."""
    n_modes = n_modes or c.max_mode()
    if n_modes < 1:
        raise ValueError("circuit acts on no modes; pass n_modes explicitly")
    qubits = c.qubits()
    if len(qubits) > 1:
        raise ValueError(f"at most one control qubit is supported, got {sorted(qubits)}")
    g0 = g1 = GroupElement.identity(n_modes)
    for t in c.terms:
        if isinstance(t, MacroRef):
            raise ValueError(f"macro {t.name} must be expanded first")
        if isinstance(t, Primitive):
            e = element_of_gate(t, n_modes)
            g0, g1 = compose(g0, e), compose(g1, e)
        else:
            for b in t.body.terms:
                if not isinstance(b, Primitive):
                    raise ValueError("conditioned bodies may contain primitives only")
                g1 = compose(g1, element_of_gate(b, n_modes))
    if qubits:
        return HybridElement(g0, g1, next(iter(qubits)))
    return g0


def propagate_covariance(g: GroupElement, mean: np.ndarray, cov: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Gaussian state moments after ``U``: mean -> S mean + d, cov -> S cov S^T."""
    return g.S @ mean + g.d, g.S @ cov @ g.S.T


def form_moments(f: QuadForm, mean: np.ndarray, cov: np.ndarray) -> tuple[float, float]:
    """Mean and variance of ``f`` on a Gaussian state with the given moments."""
    c = f.coeffs
    return float(c @ mean + f.constant), float(c @ cov @ c)


def squeezed_moments(x0: float = 0.0, p0: float = 0.0, r: float = 0.0, quad: str = "x") -> tuple[np.ndarray, np.ndarray]:
    """Single-mode moments of a Gaussian squeezed in ``quad`` by ``r`` (vacuum variance 1/2)."""
    small, large = math.exp(-2 * r) / 2, math.exp(2 * r) / 2
    cov = np.diag([small, large] if quad == "x" else [large, small])
    return np.array([x0, p0]), cov


def direct_sum_moments(parts: list[tuple[np.ndarray, np.ndarray]]) -> tuple[np.ndarray, np.ndarray]:
    mean = np.concatenate([m for m, _ in parts])
    n = mean.size
    cov = np.zeros((n, n))
    k = 0
    for _, c in parts:
        cov[k : k + 2, k : k + 2] = c
        k += 2
    return mean, cov
