"""Demonstration datasets: cat-state generation, the CSWAP entangler and nullifier variances."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .circuit import Circuit
from .fock.measure import apply, fidelity, measure_qubit, variance, expectation
from .fock.space import FockSpace, FockStateVec, TruncationError, dimension_budget
from .fock.states import (
    LEAK_TOL,
    cat_amplitudes,
    coherent_amplitudes,
    momentum_approx_amplitudes,
    position_approx_amplitudes,
    product_state,
    squeezed_vacuum_amplitudes,
)
from .lang.macros import expand_macros
from .lang.parser import parse
from .phase_space import (
    QuadForm,
    direct_sum_moments,
    element_of_circuit,
    form_moments,
    propagate_covariance,
    squeezed_moments,
)

log = logging.getLogger(__name__)

MAX_SQUEEZING = 1.8


# cat states -----------------------------------------------------------------


@dataclass
class CatDemoResult:
    alpha: complex
    cutoff: int
    n: np.ndarray
    even: np.ndarray
    odd: np.ndarray
    p_plus: float
    p_minus: float
    predicted_plus: float
    predicted_minus: float
    fidelity_even: Optional[float]
    fidelity_odd: Optional[float]

    def csv_rows(self) -> list[list]:
        return [
            [int(k), float(e.real), float(e.imag), float(o.real), float(o.imag)]
            for k, e, o in zip(self.n, self.even, self.odd)
        ]

    def summary(self) -> dict:
        return {
            "alpha": [self.alpha.real, self.alpha.imag],
            "cutoff": self.cutoff,
            "p_plus": self.p_plus,
            "p_minus": self.p_minus,
            "predicted_plus": self.predicted_plus,
            "predicted_minus": self.predicted_minus,
            "fidelity_even": self.fidelity_even,
            "fidelity_odd": self.fidelity_odd,
        }


def cat_demo(alpha: complex = 1.5, cutoff: int = 32) -> CatDemoResult:
    """``|+>|alpha>``, then the hybrid parity gate, then a ``|+/->`` measurement of the qubit."""
    alpha = complex(alpha)
    space = FockSpace(1, cutoff, 1)
    psi = product_state(space, [coherent_amplitudes(cutoff, alpha)], qubit=[1.0, 1.0])
    out = apply(expand_macros(parse("HCN(1,1)")), psi)
    plus, minus = measure_qubit(out, "pm")
    overlap = math.exp(-2 * abs(alpha) ** 2)
    zero = np.zeros(cutoff, dtype=complex)

    def fid(outcome, parity):
        if not outcome.possible:
            return None
        ref = FockStateVec(outcome.collapsed.space, cat_amplitudes(cutoff, alpha, parity))
        return fidelity(outcome.collapsed, ref)

    return CatDemoResult(
        alpha=alpha,
        cutoff=cutoff,
        n=np.arange(cutoff),
        even=plus.collapsed.amplitudes if plus.possible else zero,
        odd=minus.collapsed.amplitudes if minus.possible else zero,
        p_plus=plus.probability,
        p_minus=minus.probability,
        predicted_plus=(1 + overlap) / 2,
        predicted_minus=(1 - overlap) / 2,
        fidelity_even=fid(plus, 1),
        fidelity_odd=fid(minus, -1),
    )


# entangler ------------------------------------------------------------------

ENTANGLER_VARIANTS = {
    "direct": "CSWAPD(1,1,2)",
    "five": "CSWAP5(1,1,2)",
    "eight": "CSWAPSW(1,1,2,3)",
}


def state_from_spec(spec: str, cutoff: int, leak_tol: float = LEAK_TOL) -> np.ndarray:
    """Single-mode amplitudes for ``coh:alpha``, ``fock:n`` or ``sqz:r``."""
    kind, _, value = spec.partition(":")
    if not value:
        raise ValueError(f"state spec must look like coh:1.0, fock:2 or sqz:0.5, got {spec!r}")
    if kind == "coh":
        return coherent_amplitudes(cutoff, complex(value.replace(" ", "")), leak_tol)
    if kind == "fock":
        n = int(value)
        if not 0 <= n < cutoff:
            raise TruncationError(f"Fock state {n} does not fit below cutoff {cutoff}")
        v = np.zeros(cutoff, dtype=complex)
        v[n] = 1.0
        return v
    if kind == "sqz":
        return squeezed_vacuum_amplitudes(cutoff, float(value), leak_tol)
    raise ValueError(f"unknown state kind {kind!r} (use coh, fock or sqz)")


def smallest_cutoff(builders: list[Callable[[int], np.ndarray]], start: int = 8, limit: int = 400) -> int:
    """Smallest cutoff at which every builder succeeds without truncation error."""
    c = start
    while c <= limit:
        try:
            for b in builders:
                b(c)
            return c
        except TruncationError:
            c = int(math.ceil(c * 1.15)) + 1
    raise TruncationError(f"states do not fit below cutoff {limit}")


@dataclass
class EntanglerResult:
    variant: str
    psi: str
    phi: str
    cutoff: int
    inner_product: complex
    probabilities: dict[str, float]
    predicted: dict[str, float]
    overlaps: dict[str, Optional[float]]
    degenerate: dict[str, bool]
    collapsed: dict[str, Optional[FockStateVec]] = field(default_factory=dict, repr=False)

    def to_json(self) -> dict:
        return {
            "variant": self.variant,
            "psi": self.psi,
            "phi": self.phi,
            "cutoff": self.cutoff,
            "inner_product": [self.inner_product.real, self.inner_product.imag],
            "probabilities": self.probabilities,
            "predicted_probabilities": self.predicted,
            "overlaps": self.overlaps,
            "degenerate": self.degenerate,
        }


def entangler_demo(psi: str, phi: str, variant: str = "direct", cutoff: Optional[int] = None) -> EntanglerResult:
    """Control in ``|+>``, CSWAP on ``|Psi>|Phi>``, measure the qubit in the ``|+/->`` basis.

    The collapsed states are compared with normalized ``|Psi>|Phi> +/- |Phi>|Psi>``.
    The ``eight`` variant routes through a vacuum ancilla mode, which must return to vacuum.
    """
    if variant not in ENTANGLER_VARIANTS:
        raise ValueError(f"variant must be one of {sorted(ENTANGLER_VARIANTS)}")
    if cutoff is None:
        # a tight single-mode leak keeps the two-mode weight at total excitation >= cutoff negligible
        cutoff = smallest_cutoff([lambda c: state_from_spec(psi, c, 1e-14), lambda c: state_from_spec(phi, c, 1e-14)])
        cutoff = max(cutoff, 40 if variant == "eight" else 12)
    a, b = state_from_spec(psi, cutoff), state_from_spec(phi, cutoff)
    vac = np.zeros(cutoff, dtype=complex)
    vac[0] = 1.0
    extra = [vac] if variant == "eight" else []
    n_modes = 2 + len(extra)
    space = FockSpace(n_modes, cutoff, 1)
    state = product_state(space, [a, b] + extra, qubit=[1.0, 1.0])
    out = apply(expand_macros(parse(ENTANGLER_VARIANTS[variant])), state)
    outcomes = measure_qubit(out, "pm")

    mode_space = FockSpace(n_modes, cutoff)
    ab = product_state(mode_space, [a, b] + extra).amplitudes
    ba = product_state(mode_space, [b, a] + extra).amplitudes
    ip = complex(np.vdot(a, b))
    probabilities, predicted, overlaps, degenerate, collapsed = {}, {}, {}, {}, {}
    for o, sign in zip(outcomes, (1, -1)):
        ref = ab + sign * ba
        nrm = float(np.linalg.norm(ref))
        degenerate[o.label] = nrm < 1e-12
        probabilities[o.label] = o.probability
        predicted[o.label] = max(0.0, (1 + sign * abs(ip) ** 2) / 2)
        collapsed[o.label] = o.collapsed
        if degenerate[o.label] or not o.possible:
            overlaps[o.label] = None
        else:
            overlaps[o.label] = fidelity(o.collapsed, FockStateVec(mode_space, ref / nrm))
    return EntanglerResult(variant, psi, phi, cutoff, ip, probabilities, predicted, overlaps, degenerate, collapsed)


# nullifiers -----------------------------------------------------------------


@dataclass(frozen=True)
class NullifierSetup:
    """A circuit, its single-mode inputs and the nullifier forms to record."""

    label: str
    circuit: str
    inputs: tuple[tuple[str, float], ...]  # ("x" | "p", centre) per mode
    forms: tuple[tuple[str, dict], ...]


NULLIFIER_SETUPS = (
    NullifierSetup(
        "psi+",
        "F(1);CNP(1,2)",
        (("x", 0.0), ("x", 0.0)),
        (("x1-x2", {"x1": 1, "x2": -1}), ("p1+p2", {"p1": 1, "p2": 1})),
    ),
    NullifierSetup(
        "psi-",
        "F(1);CNM(1,2)",
        (("x", 0.0), ("x", 0.0)),
        (("x1-x2", {"x1": 1, "x2": -1}), ("p1+p2", {"p1": 1, "p2": 1})),
    ),
    NullifierSetup(
        "chain3",
        "CHAINP(1,2,3)",
        (("p", 0.0), ("x", 0.0), ("x", 0.0)),
        (
            ("p1+p2+p3", {"p1": 1, "p2": 1, "p3": 1}),
            ("x1-x2", {"x1": 1, "x2": -1}),
            ("x2-x3", {"x2": 1, "x3": -1}),
        ),
    ),
)


def _gaussian_inputs(inputs, r):
    parts = []
    for quad, centre in inputs:
        if quad == "x":
            parts.append(squeezed_moments(x0=centre, r=r, quad="x"))
        else:
            parts.append(squeezed_moments(p0=centre, r=r, quad="p"))
    return direct_sum_moments(parts)


def _fock_inputs(inputs, r, cutoff):
    out = []
    for quad, centre in inputs:
        if quad == "x":
            out.append(position_approx_amplitudes(cutoff, centre, r))
        else:
            out.append(momentum_approx_amplitudes(cutoff, centre, r))
    return out


def nullifier_cutoff(setup: NullifierSetup, r: float) -> int:
    """Cutoff from the largest single-mode quadrature variance before and after the circuit.

    The factor grows with ``r`` because the nullifier is a small difference of large
    quadratures; the result is capped so the state vector stays within the dense budget.
    """
    n = len(setup.inputs)
    mean, cov = _gaussian_inputs(setup.inputs, r)
    g = element_of_circuit(expand_macros(parse(setup.circuit)), n)
    _, cov_out = propagate_covariance(g, mean, cov)
    v_max = max(float(np.linalg.eigvalsh(C[2 * k : 2 * k + 2, 2 * k : 2 * k + 2]).max()) for C in (cov, cov_out) for k in range(n))
    want = int(math.ceil((9.0 + 3.5 * r) * v_max))
    need = smallest_cutoff([lambda c: np.stack(_fock_inputs(setup.inputs, r, c))], start=max(8, want // 2))
    cutoff = max(16, want, need)
    cap = int(math.floor(dimension_budget() ** (2.0 / n)))
    if cutoff > cap:
        if need > cap:
            raise TruncationError(f"{setup.label} at r={r} needs cutoff {need}, above the budget cap {cap}")
        log.warning("%s at r=%g: cutoff %d capped at %d; the smallest nullifier may lose accuracy", setup.label, r, cutoff, cap)
        cutoff = cap
    return cutoff


@dataclass(frozen=True)
class NullifierRow:
    r: float
    variance_name: str
    value: float
    gaussian_prediction: float
    cutoff: int


def nullifier_demo(rs, setups=NULLIFIER_SETUPS, cutoff: Optional[int] = None) -> list[NullifierRow]:
    """Fock-space nullifier variances next to the Gaussian covariance prediction."""
    rows = []
    for r in rs:
        r = float(r)
        if r < 0:
            raise ValueError(f"squeezing must be >= 0, got {r}")
        if r > MAX_SQUEEZING:
            raise ValueError(f"squeezing r={r} exceeds the supported maximum {MAX_SQUEEZING}")
        for s in setups:
            n = len(s.inputs)
            c = cutoff or nullifier_cutoff(s, r)
            circ = expand_macros(parse(s.circuit))
            space = FockSpace(n, c)
            out = apply(circ, product_state(space, _fock_inputs(s.inputs, r, c)))
            mean, cov = propagate_covariance(element_of_circuit(circ, n), *_gaussian_inputs(s.inputs, r))
            for name, terms in s.forms:
                f = QuadForm.from_terms(n, terms)
                rows.append(NullifierRow(r, f"{s.label}:{name}", variance(f, out), form_moments(f, mean, cov)[1], c))
            del out
    return rows


@dataclass(frozen=True)
class MomentCheck:
    """Fock mean of a form against the Gaussian prediction, with the predicted spread."""

    mean: float
    predicted_mean: float
    predicted_std: float

    @property
    def sigmas(self) -> float:
        return abs(self.mean - self.predicted_mean) / self.predicted_std


def _moment_check(circuit: str, inputs, form: dict, r: float, cutoff: Optional[int]) -> MomentCheck:
    n = len(inputs)
    circ = expand_macros(parse(circuit))
    setup = NullifierSetup("moment", circuit, tuple(inputs), ())
    c = cutoff or nullifier_cutoff(setup, r)
    space = FockSpace(n, c)
    out = apply(circ, product_state(space, _fock_inputs(inputs, r, c)))
    f = QuadForm.from_terms(n, form)
    mean, cov = propagate_covariance(element_of_circuit(circ, n), *_gaussian_inputs(inputs, r))
    m, v = form_moments(f, mean, cov)
    return MomentCheck(float(expectation(f, out)), m, math.sqrt(v))


def nullifier_mean(y: float, r: float = 1.0, sign: str = "+", cutoff: Optional[int] = None) -> MomentCheck:
    """``<x1 - x2>`` on the psi state built from ``|z~0>|y>`` approximants (expected ``-/+ y``)."""
    circuit = "F(1);CNP(1,2)" if sign == "+" else "F(1);CNM(1,2)"
    return _moment_check(circuit, (("x", 0.0), ("x", y)), {"x1": 1, "x2": -1}, r, cutoff)


def state_transfer(x0: float, r: float = 0.5, first: str = "CNP", cutoff: Optional[int] = None) -> MomentCheck:
    """``<x2>`` after ``CN-_21 CN(+/-)_12`` on ``|x0>|y=0>`` approximants (expected ``x0``)."""
    if first not in ("CNP", "CNM"):
        raise ValueError("first gate must be CNP or CNM")
    return _moment_check(f"{first}(1,2);CNM(2,1)", (("x", x0), ("x", 0.0)), {"x2": 1}, r, cutoff)


def transfer_circuit(first: str = "CNP") -> Circuit:
    return parse(f"{first}(1,2);CNM(2,1)")
