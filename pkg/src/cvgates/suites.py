"""Identity suites run by ``cvgates verify``.

Every check returns a :class:`VerificationCheck` carrying the level it is expected to
reach; a suite passes iff every check meets its expected level.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .demos import cat_demo, entangler_demo, state_transfer
from .fock.compare import braiding_check, hermiticity_defect, matrix_commutator_check
from .fock.kernels import gate_unitary, guarded_block
from .fock.measure import apply
from .fock.space import FockSpace, guard_mask
from .fock.states import coherent_state
from .lang.equivalence import (
    EQUAL,
    EQUAL_UP_TO_PHASE,
    NOT_EQUAL,
    REPORTED,
    EquivalencePolicy,
    VerificationCheck,
    check_equivalence,
    element,
)
from .lang.macros import MACROS, expand_macros
from .lang.parser import parse
from .phase_space import GroupElement, QuadForm, equiv, heisenberg_map

SUITES = ("onebody", "cn", "swap", "cnn", "clone", "hybrid", "cswap", "braiding")

# Fock tolerance used by checks whose own tolerance is looser than the default
LOOSE_FOCK = 1e-6


@dataclass(frozen=True)
class SuiteConfig:
    suite: str = "all"
    cutoff: Optional[int] = None
    guard: Optional[int] = None
    tol_symplectic: float = 1e-12
    tol_fock: float = 1e-8
    strict_phase: bool = False
    output: Optional[str] = None
    tol_override: Optional[float] = None

    def __post_init__(self):
        if self.suite != "all" and self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}; choose from all, {', '.join(SUITES)}")
        if self.cutoff is not None and self.cutoff < 2:
            raise ValueError("cutoff must be >= 2")
        if self.guard is not None and self.guard < 0:
            raise ValueError("guard must be >= 0")
        if self.cutoff is not None and self.guard is not None and self.guard >= self.cutoff:
            raise ValueError(f"guard {self.guard} must be below cutoff {self.cutoff}")
        for t in (self.tol_symplectic, self.tol_fock, self.tol_override):
            if t is not None and not t > 0:
                raise ValueError("tolerances must be positive")

    def truncation(self, default: tuple[int, int]) -> tuple[int, int]:
        cutoff = self.cutoff if self.cutoff is not None else default[0]
        guard = self.guard if self.guard is not None else default[1]
        if self.cutoff is not None and self.guard is None:
            guard = min(guard, cutoff - 1)
        if not 0 <= guard < cutoff:
            raise ValueError(f"guard {guard} must be below cutoff {cutoff}")
        return cutoff, guard

    def tol(self, default: float) -> float:
        return self.tol_override if self.tol_override is not None else default

    def echo(self) -> dict:
        return {
            "suite": self.suite,
            "cutoff": self.cutoff,
            "guard": self.guard,
            "tol_symplectic": self.tol(self.tol_symplectic),
            "tol_fock": self.tol(self.tol_fock),
            "strict_phase": self.strict_phase,
        }


CheckFn = Callable[[SuiteConfig], VerificationCheck]
REGISTRY: dict[str, list[tuple[str, CheckFn]]] = {s: [] for s in SUITES}


def _register(suite: str, name: str):
    def deco(fn: CheckFn) -> CheckFn:
        REGISTRY[suite].append((f"{suite}.{name}", fn))
        return fn

    return deco


def _timed(fn: Callable[[], VerificationCheck]) -> VerificationCheck:
    t0 = time.perf_counter()
    chk = fn()
    chk.ms = (time.perf_counter() - t0) * 1e3
    return chk


def _scalar(name: str, anchor: str, backend: str, error: float, tol: float, expected: str = EQUAL, **details) -> VerificationCheck:
    status = EQUAL if error <= tol else NOT_EQUAL
    return VerificationCheck(name, anchor, backend, status, float(error), tol, expected=expected, details=details)


def _equivalence(
    a: str,
    b: str,
    anchor: str,
    backend: str = "both",
    expected: str = EQUAL_UP_TO_PHASE,
    truncation: Optional[tuple[int, int]] = None,
    tol_fock: Optional[float] = None,
    n_modes: Optional[int] = None,
) -> CheckFn:
    def run(cfg: SuiteConfig) -> VerificationCheck:
        cutoff = guard = None
        if backend != "symplectic":
            n = n_modes or max(parse(a).max_mode(), parse(b).max_mode())
            from .lang.equivalence import AUTO_TRUNCATION

            cutoff, guard = cfg.truncation(truncation or AUTO_TRUNCATION[n])
        policy = EquivalencePolicy(
            backend=backend,
            strict_phase=cfg.strict_phase,
            cutoff=cutoff,
            guard=guard,
            tol_symplectic=cfg.tol(cfg.tol_symplectic),
            tol_fock=cfg.tol(tol_fock or cfg.tol_fock),
            n_modes=n_modes,
        )
        chk = check_equivalence(parse(a), parse(b), policy)
        chk.anchor = anchor
        exp = expected
        if cfg.strict_phase and exp == EQUAL_UP_TO_PHASE and backend != "symplectic":
            exp = EQUAL
        chk.expected = exp
        chk.details["lhs"], chk.details["rhs"] = a, b
        return chk

    return run


def _add(suite: str, name: str, fn: CheckFn) -> None:
    REGISTRY[suite].append((f"{suite}.{name}", fn))


def _matrix_check(suite, name, anchor, build: Callable[[], tuple[np.ndarray, np.ndarray]]):
    def run(cfg: SuiteConfig) -> VerificationCheck:
        got, want = build()
        err = float(np.max(np.abs(got - want)))
        chk = _scalar("", anchor, "symplectic", err, cfg.tol(cfg.tol_symplectic))
        if chk.status == EQUAL:
            chk.status = EQUAL_UP_TO_PHASE
        chk.expected = EQUAL_UP_TO_PHASE
        return chk

    _add(suite, name, run)


def _hermiticity(suite, name, text, anchor, truncation, hermitian: bool):
    """Guarded ``max |U - U^dag|``; the non-Hermitian control must exceed 0.1."""

    def run(cfg: SuiteConfig) -> VerificationCheck:
        c = expand_macros(parse(text))
        cutoff, guard = cfg.truncation(truncation)
        block = guarded_block(c, FockSpace(c.max_mode(), cutoff), guard)
        defect = hermiticity_defect(block)
        tol = cfg.tol(cfg.tol_fock)
        if defect <= tol:
            status = EQUAL
        elif defect > 0.1:
            status = NOT_EQUAL
        else:
            status = "inconclusive"
        return VerificationCheck(
            "", anchor, "fock", status, defect, tol, expected=EQUAL if hermitian else NOT_EQUAL,
            details={"cutoff": cutoff, "guard": guard, "gate": text},
        )

    _add(suite, name, run)


def _symplecticity(suite, name, texts: list[str], anchor: str):
    def run(cfg: SuiteConfig) -> VerificationCheck:
        worst = 0.0
        for t in texts:
            e = element(parse(t))
            worst = max(worst, e.symplectic_defect())
        chk = _scalar("", anchor, "symplectic", worst, cfg.tol(cfg.tol_symplectic), count=len(texts))
        return chk

    _add(suite, name, run)


# onebody --------------------------------------------------------------------

_add("onebody", "not_reflects_phase_space", lambda cfg: _scalar(
    "", "NOT |x> = |-x>", "symplectic",
    float(np.max(np.abs(element(parse("NOT(1)")).S + np.eye(2)))), cfg.tol(cfg.tol_symplectic),
))
_add("onebody", "rot_pi_is_not", _equivalence("ROT(1,pi)", "NOT(1)", "NOT = (-1)^{a^dag a}", expected=EQUAL))
_add("onebody", "not_squared", _equivalence("NOT(1);NOT(1)", "", "NOT^2 = 1", expected=EQUAL, n_modes=1))
_add("onebody", "fourier_is_quarter_turn", _equivalence("F(1)", "ROT(1,pi/2)", "F(sqrt 2) = e^{i pi/2 a^dag a}", expected=EQUAL))
_add("onebody", "fourier_fourth_power", _equivalence("F(1);F(1);F(1);F(1)", "", "F^4 = 1", expected=EQUAL, n_modes=1))
_add("onebody", "fourier_general_sigma_squared", _equivalence(
    "F(1,0.8);F(1,0.8)", "NOT(1)", "F(sigma)^2 = NOT", truncation=(40, 8), tol_fock=LOOSE_FOCK,
))
_hermiticity("onebody", "not_hermitian", "NOT(1)", "NOT is Hermitian", (40, 24), True)
_symplecticity(
    "onebody",
    "symplecticity_primitives",
    ["NOT(1)", "ROT(1,0.3)", "F(1)", "F(1,0.7)", "F(1,2.5)", "XP(1,2,0.4)", "BS(1,2,0.3)", "BSX(1,2,0.9)"],
    "S^T J S = J",
)


def _macro_instances() -> list[str]:
    out = []
    for name, mdef in sorted(MACROS.items()):
        groups = []
        k = 0
        for kinds in mdef.slots:
            vals = []
            for kind in kinds:
                if kind == "q":
                    vals.append("1")
                elif kind == "a":
                    vals.append("0.5")
                elif kind == "m*":
                    vals.extend(str(k + i + 1) for i in range(2))
                    k += 2
                else:
                    k += 1
                    vals.append(str(k))
            groups.append(",".join(vals))
        out.append(f"{name}({';'.join(groups)})")
    return out


_symplecticity("onebody", "symplecticity_macros", _macro_instances(), "S^T J S = J")


# cn -------------------------------------------------------------------------


def _pos_block(text: str) -> np.ndarray:
    return element(parse(text)).position_block()


_matrix_check("cn", "cnp_triple_position_sector", "CN+_12 CN+_21 CN+_12 |x,y> = |2x+y, 3x+2y>",
              lambda: (_pos_block("CN3P(1,2)"), np.array([[2.0, 1.0], [3.0, 2.0]])))
_matrix_check("cn", "cnm_triple_position_sector", "CN-_12 CN-_21 CN-_12 |x,y> = |-y, -x>",
              lambda: (_pos_block("CN3M(1,2)"), np.array([[0.0, -1.0], [-1.0, 0.0]])))
_matrix_check("cn", "cnp_shifts_target", "CN+_12 |x,y> = |x, x+y>",
              lambda: (_pos_block("CNP(1,2)"), np.array([[1.0, 0.0], [1.0, 1.0]])))
_matrix_check("cn", "cnm_shifts_target", "CN-_12 |x,y> = |x, x-y>",
              lambda: (_pos_block("CNM(1,2)"), np.array([[1.0, 0.0], [1.0, -1.0]])))
_add("cn", "cnm_not_ordering", _equivalence(
    "XP(1,2,-1);NOT(2)", "NOT(2);XP(1,2,1)", "CN-_12 = NOT_2 e^{i x1 p2} = e^{-i x1 p2} NOT_2", expected=EQUAL,
))
_add("cn", "cnm_squared", _equivalence("CNM(1,2);CNM(1,2)", "", "(CN-)^2 = 1", expected=EQUAL, n_modes=2))
_add("cn", "cnp_differs_from_cnm", _equivalence("CNP(1,2)", "CNM(1,2)", "CN+ != CN-", expected=NOT_EQUAL))
_add("cn", "cnpm_momentum_basis", _equivalence(
    "F(1);F(2);CNP(1,2);F(1);F(1);F(1);F(2);F(2);F(2)", "CNPM(1,2)",
    "momentum-basis CN+ is the position-basis gate conjugated by F", expected=EQUAL_UP_TO_PHASE,
))
_hermiticity("cn", "cnm_hermitian", "CNM(1,2)", "CN- is Hermitian", (64, 16), True)
_hermiticity("cn", "cnp_not_hermitian", "CNP(1,2)", "CN+ is not Hermitian", (64, 16), False)


def _nullifier_map():
    # CN+_12 F_1 |z>|y>: x1 - x2 pulled back through the circuit is -x2 (input), p1 + p2 is p1
    g = element(parse("F(1);CNP(1,2)"))
    f1 = heisenberg_map(g, QuadForm.from_terms(2, {"x1": 1, "x2": -1}))
    f2 = heisenberg_map(g, QuadForm.from_terms(2, {"p1": 1, "p2": 1}))
    got = np.concatenate([f1.coeffs, f2.coeffs])
    want = np.concatenate([QuadForm.from_terms(2, {"x2": -1}).coeffs, QuadForm.from_terms(2, {"x1": 1}).coeffs])
    return got, want


_matrix_check("cn", "psi_plus_nullifiers", "(x1 - x2) psi+ = -y psi+, (p1 + p2) psi+ = z psi+", _nullifier_map)


def _chain_nullifiers(n: int = 4):
    # pulled back through the chain, p-sum lands on p1 and x differences on input x_j
    g = element(parse(f"CHAINP({','.join(str(k) for k in range(1, n + 1))})"))
    psum = heisenberg_map(g, QuadForm.from_terms(n, {f"p{k}": 1 for k in range(1, n + 1)})).coeffs
    rows = [psum]
    want = [QuadForm.from_terms(n, {"p1": 1}).coeffs]
    for k in range(2, n):
        rows.append(heisenberg_map(g, QuadForm.from_terms(n, {f"x{k}": 1, f"x{k + 1}": -1})).coeffs)
        want.append(QuadForm.from_terms(n, {f"x{k}": 1, f"x{k + 1}": -1}).coeffs)
    rows.append(heisenberg_map(g, QuadForm.from_terms(n, {"x1": 1, "x2": -1})).coeffs)
    want.append(QuadForm.from_terms(n, {"x2": -1}).coeffs)
    return np.array(rows), np.array(want)


_matrix_check("cn", "chain_nullifiers", "N-party chain: total momentum zero, relative positions zero", _chain_nullifiers)


# swap -----------------------------------------------------------------------

_SWAP_ANCHOR = "SWAP_12 = NOT_2 B_12 = NOT_1 NOT_2 CN-_12 CN-_21 CN-_12 = NOT_2 CN-_12 CN-_21 CN+_12"
for a, b in [("SWAP3CN", "SWAPBS"), ("SWAPMIX", "SWAPBS"), ("SWAP3CN", "SWAPMIX"), ("SWAPEXP", "SWAPBS")]:
    _add("swap", f"{a.lower()}_vs_{b.lower()}", _equivalence(f"{a}(1,2)", f"{b}(1,2)", _SWAP_ANCHOR))
for s in ("SWAP3CN", "SWAPMIX", "SWAPBS", "SWAPEXP"):
    _add("swap", f"{s.lower()}_squared", _equivalence(f"{s}(1,2);{s}(1,2)", "", "SWAP^2 = 1", n_modes=2))
_add("swap", "conjugation_rule", _equivalence(
    "SWAP(1,2);CNP(1,2);SWAP(1,2)", "CNP(2,1)", "SWAP_12 CN_12 SWAP_12 = CN_21", expected=EQUAL,
))
_matrix_check("swap", "symplectic_permutation", "SWAP exchanges (x1,p1) and (x2,p2)", lambda: (
    element(parse("SWAPBS(1,2)")).S, np.kron(np.array([[0.0, 1.0], [1.0, 0.0]]), np.eye(2)),
))
_matrix_check("swap", "beam_splitter_momenta", "B_12 (p1, p2) -> (p2, -p1)", lambda: (
    element(parse("B(1,2)")).S, np.array([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]], dtype=float),
))


def _fock_swap_action(cfg: SuiteConfig) -> VerificationCheck:
    cutoff, guard = cfg.truncation((24, 16))
    space = FockSpace(2, cutoff)
    block = guarded_block(expand_macros(parse("SWAPBS(1,2)")), space, guard)
    idx = np.flatnonzero(guard_mask(space, guard))
    ns = np.array(np.unravel_index(idx, space.shape)).T
    perm = {tuple(n): k for k, n in enumerate(ns)}
    want = np.zeros_like(block)
    for k, (n, m) in enumerate(ns):
        want[perm[(m, n)], k] = 1.0
    err = float(np.max(np.abs(block - want)))
    return _scalar("", "SWAP_12 |n>_1 |m>_2 = |m>_1 |n>_2", "fock", err, cfg.tol(cfg.tol_fock), cutoff=cutoff, guard=guard)


_add("swap", "fock_action_strict_phase", _fock_swap_action)


def _transfer(first: str):
    def run(cfg: SuiteConfig) -> VerificationCheck:
        res = state_transfer(1.0, r=0.5, first=first)
        chk = _scalar("", "CN-_21 CN(+/-)_12 |x>|y=0> = |y=0>|x>", "fock", res.sigmas, 3.0,
                      mean=res.mean, predicted_mean=res.predicted_mean, predicted_std=res.predicted_std)
        chk.details["units"] = "standard deviations"
        return chk

    return run


_add("swap", "double_cn_transfer_plus", _transfer("CNP"))
_add("swap", "double_cn_transfer_minus", _transfer("CNM"))


# cnn ------------------------------------------------------------------------

_add("cnn", "cnn2_squared", _equivalence("CNN(1;2);CNN(1;2)", "", "controlled^n-NOT is self-inverse", expected=EQUAL, n_modes=2))
_add("cnn", "cnn3_squared", _equivalence("CNN(1,2;3);CNN(1,2;3)", "", "controlled^n-NOT is self-inverse", expected=EQUAL, n_modes=3))
_add("cnn", "cnn2_is_cnm", _equivalence("CNN(1;2)", "CNM(1,2)", "one-control CNN is CN-", expected=EQUAL))
_matrix_check("cnn", "cnn3_target_map", "controlled^n-NOT: x_t -> -x_t + sum x_n", lambda: (
    _pos_block("CNN(1,2;3)"), np.array([[1.0, 0, 0], [0, 1.0, 0], [1.0, 1.0, -1.0]]),
))
_hermiticity("cnn", "cnn2_hermitian", "CNN(1;2)", "controlled^n-NOT is Hermitian", (64, 16), True)
_hermiticity("cnn", "cnn3_hermitian", "CNN(1,2;3)", "controlled^n-NOT is Hermitian", (12, 8), True)


# clone ----------------------------------------------------------------------

_add("clone", "clone4_vs_reduced", _equivalence(
    "CLONE4(1,2,3)", "CLONERED(1,2,3)",
    "CN-_31 CN-_21 CN-_13 CN-_12 = e^{-i(x3 - x2)p1} e^{-i x1(p2 + p3)} NOT_2 NOT_3",
    truncation=(12, 8), tol_fock=LOOSE_FOCK,
))


def _commutator(cfg: SuiteConfig) -> VerificationCheck:
    cutoff, guard = cfg.truncation((20, 10))
    res = matrix_commutator_check(cutoff, guard)
    tol = cfg.tol(LOOSE_FOCK)
    ok = res.residual <= tol and res.commutator_norm > 0.1 and res.swapped_residual > 0.1
    chk = VerificationCheck(
        "", "[CN-_31, CN-_21] = e^{i(x2 - x3)p1} - e^{i(x3 - x2)p1}", "fock",
        EQUAL if ok else NOT_EQUAL, res.residual, tol,
        details={"cutoff": cutoff, "guard": guard, "commutator_norm": res.commutator_norm,
                 "swapped_residual": res.swapped_residual},
    )
    return chk


_add("clone", "cnm_commutator", _commutator)


# hybrid ---------------------------------------------------------------------


def _hcn_block(cfg: SuiteConfig) -> VerificationCheck:
    cutoff, _ = cfg.truncation((24, 16))
    space = FockSpace(1, cutoff, 1)
    U = gate_unitary(expand_macros(parse("HCN(1,1)")), space).matrix
    parity = np.diag((-1.0) ** np.arange(cutoff))
    want = np.kron(np.diag([1.0, 0.0]), np.eye(cutoff)) + np.kron(np.diag([0.0, 1.0]), parity)
    return _scalar("", "hybrid CN = P0 (x) I + P1 (x) (-1)^{a^dag a}", "fock",
                   float(np.max(np.abs(U - want))), cfg.tol(1e-10), cutoff=cutoff)


_add("hybrid", "hcn_block_form", _hcn_block)


def _hcn_coherent(cfg: SuiteConfig) -> VerificationCheck:
    cutoff = cfg.cutoff or 32
    space = FockSpace(1, cutoff, 1)
    alpha = 1.5
    out = apply(expand_macros(parse("HCN(1,1)")), coherent_state(space, 1, alpha, qubit=[0.0, 1.0]))
    want = coherent_state(space, 1, -alpha, qubit=[0.0, 1.0])
    err = float(np.max(np.abs(out.amplitudes - want.amplitudes)))
    return _scalar("", "hybrid CN |1>|alpha> = |1>|-alpha>", "fock", err, cfg.tol(cfg.tol_fock), cutoff=cutoff)


_add("hybrid", "hcn_flips_coherent", _hcn_coherent)


def _cat(cfg: SuiteConfig) -> VerificationCheck:
    res = cat_demo(1.5, cfg.cutoff or 32)
    errs = [1 - res.fidelity_even, 1 - res.fidelity_odd,
            abs(res.p_plus - res.predicted_plus), abs(res.p_minus - res.predicted_minus)]
    return _scalar("", "measuring |+/-> collapses to even and odd coherent states", "fock",
                   max(errs), cfg.tol(cfg.tol_fock), **res.summary())


_add("hybrid", "cat_generation", _cat)


# cswap ----------------------------------------------------------------------

_CSWAP = "CSWAP = P0 + P1 SWAP"
_add("cswap", "five_factor_vs_direct", _equivalence(
    "CSWAP5(1,1,2)", "CSWAPD(1,1,2)", "CSWAP from five two-body operators", truncation=(12, 8), tol_fock=LOOSE_FOCK,
))
_add("cswap", "five_factor_first_form_vs_direct", _equivalence(
    "CSWAP5A(1,1,2)", "CSWAPD(1,1,2)", "CSWAP = e^{i pi n2 P} e^{i pi/2 Jx} e^{i pi Jz P} e^{-i pi/2 Jx}",
    truncation=(12, 8), tol_fock=LOOSE_FOCK,
))
_add("cswap", "beam_splitter_form_vs_direct", _equivalence(
    "CSWAP2(1,1,2)", "CSWAPD(1,1,2)", "CSWAP = e^{i pi n2 P} e^{i pi/2 (x1 p2 - x2 p1) P}", truncation=(12, 8),
))
_add("cswap", "jz_to_jy_conjugation", _equivalence(
    "HJZCONJ(1,1,2)", "HJY(1,1,2)", "U' = e^{i pi/2 Jx} e^{i pi Jz P} e^{-i pi/2 Jx} = e^{i pi Jy P}",
    truncation=(12, 8),
))
_add("cswap", "three_body_form_vs_direct", _equivalence(
    "CSWAP3B(1,1,2)", "CSWAPD(1,1,2)", "CSWAP = e^{i x1 p2 P} e^{i pi n1 P} e^{i x2 p1 P} e^{-i x1 p2 P}",
))


def _entangler(cfg: SuiteConfig) -> VerificationCheck:
    direct = entangler_demo("fock:1", "fock:0", "direct")
    five = entangler_demo("fock:1", "fock:0", "five", cutoff=direct.cutoff)
    errs = [1 - v for v in direct.overlaps.values()]
    errs += [abs(direct.probabilities[k] - 0.5) for k in "+-"]
    for k in "+-":
        errs.append(float(np.max(np.abs(direct.collapsed[k].amplitudes - five.collapsed[k].amplitudes))))
    return _scalar("", "CSWAP plus measurement is a universal entangler", "fock", max(errs), cfg.tol(LOOSE_FOCK),
                   **direct.to_json())


_add("cswap", "universal_entangler", _entangler)


# braiding -------------------------------------------------------------------

_BRAID_XP = [(x, p) for x in (0.0, 0.7, -0.7) for p in (0.0, 0.7, -0.7)]


def _braid(theta: float, anchor: str):
    def run(cfg: SuiteConfig) -> VerificationCheck:
        cutoff, guard = cfg.truncation((40, 24))
        results = [braiding_check(cutoff, guard, x, p, theta) for x, p in _BRAID_XP]
        worst = max(results, key=lambda r: r.strict_error)
        chk = _scalar("", anchor, "fock", worst.strict_error, cfg.tol(1e-4), cutoff=cutoff, guard=guard,
                      worst_x=worst.x, worst_p=worst.p)
        chk.phase = [[worst.fitted_phase.real, worst.fitted_phase.imag]]
        return chk

    return run


_add("braiding", "scalar_four_factor", _braid(math.pi / 2, "e^{ixp} = e^{ix p^} e^{ip x^} e^{-ix p^} e^{-ip x^}"))
_add("braiding", "scalar_theta_pi_6", _braid(math.pi / 6, "e^{ixp sin t} from rotated displacements, t = pi/6"))
_add("braiding", "scalar_theta_0", _braid(0.0, "t = 0 gives the identity"))


def _eight_factor_symplectic(cfg: SuiteConfig) -> VerificationCheck:
    h = element(parse("CSWAP8(1,1,2,3)"))
    target = element(parse("C[1]{XP(2,1,-1)}"), 3)
    e0 = equiv(h.branch0, GroupElement.identity(3), 1e-10)[1]
    e1 = equiv(h.branch1, target.branch1, 1e-10)[1]
    tol = cfg.tol(1e-10)
    chk = _scalar("", "eight two-body operators (ancilla reading): branch0 = 1, branch1 = e^{i x2 p1}",
                  "symplectic", max(e0, e1), tol, branch0_error=e0, branch1_error=e1)
    if chk.status == EQUAL:
        chk.status = EQUAL_UP_TO_PHASE
    chk.expected = EQUAL_UP_TO_PHASE
    return chk


_add("braiding", "eight_factor_symplectic", _eight_factor_symplectic)
_add("braiding", "eight_factor_fock", _equivalence(
    "CSWAP8(1,1,2,3)", "C[1]{XP(2,1,-1)}", "eight two-body operators, truncated-space residual",
    backend="fock", expected=REPORTED, truncation=(24, 4), n_modes=3,
))
_add("braiding", "swap_from_eight_factor_expansions", _equivalence(
    "CSWAPSW(1,1,2,3)", "CSWAPD(1,1,2)", "CSWAP from three expanded three-body factors",
    backend="symplectic", n_modes=3,
))
_add("braiding", "swap_from_eight_factor_expansions_fock", _equivalence(
    "CSWAPSW(1,1,2,3)", "CSWAPD(1,1,2)", "CSWAP from three expanded three-body factors, truncated-space residual",
    backend="fock", expected=REPORTED, truncation=(24, 4), n_modes=3,
))


def suite_checks(suite: str) -> list[tuple[str, CheckFn]]:
    if suite == "all":
        return [c for s in SUITES for c in REGISTRY[s]]
    return list(REGISTRY[suite])


def run_suite(cfg: SuiteConfig) -> list[VerificationCheck]:
    """Run a suite; results are sorted by check name."""
    out = []
    for name, fn in sorted(suite_checks(cfg.suite)):
        chk = _timed(lambda: fn(cfg))
        chk.name = name
        out.append(chk)
    return out
