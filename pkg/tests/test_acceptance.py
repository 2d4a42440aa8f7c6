"""Acceptance criteria 1-14, each reported as one PASS/FAIL line at its stated tolerance.

The verdict lines are printed in the terminal summary (see ``conftest.py``) and
also on stdout of each test.
"""

import math

import numpy as np
import pytest
from circuits import macro_example, random_circuit

from cvgates.circuit import PRIMITIVES, Circuit, same_structure
from cvgates.demos import cat_demo, nullifier_demo, state_transfer
from cvgates.fock import (
    FockSpace,
    braiding_check,
    circuit_columns,
    gate_unitary,
    guard_mask,
    guarded_block,
    hermiticity_defect,
    matrix_commutator_check,
)
from cvgates.lang import (
    EQUAL_UP_TO_PHASE,
    MACROS,
    EquivalencePolicy,
    ParseError,
    check_equivalence,
    element,
    expand_macros,
    meets,
    parse,
    print_canonical,
)
from cvgates.phase_space import GroupElement, HybridElement, equiv

SYMP = 1e-12
FOCK = 1e-8
SWAP_FORMS = ("SWAP3CN(1,2)", "SWAPMIX(1,2)", "SWAPBS(1,2)")


def verdict(record_property, number, title, parts):
    """Record and print one line for a criterion, then fail if any part failed.

    ``parts`` is a list of ``(ok, detail)`` pairs.
    """
    ok = all(p for p, _ in parts)
    failing = [d for p, d in parts if not p]
    shown = failing if failing else [d for _, d in parts]
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} {title} [{'; '.join(shown)}]"
    record_property("acceptance", line)
    print(line)
    assert ok, line


def fock_compare(a, b, cutoff, guard, tol, n_modes=None):
    policy = EquivalencePolicy(backend="fock", cutoff=cutoff, guard=guard, tol_fock=tol, n_modes=n_modes)
    return check_equivalence(parse(a), parse(b), policy)


def symp_compare(a, b, n_modes=None):
    return equiv(element(parse(a), n_modes), element(parse(b), n_modes), SYMP)


def _primitive_instances():
    out = []
    for name, (n_modes, n_req, n_opt) in PRIMITIVES.items():
        modes = "1" if n_modes == 1 else "1,2"
        if n_req == 0:
            out.append(f"{name}({modes})")
        if n_req + n_opt:
            out += [f"{name}({modes},{v})" for v in ("0.37", "pi/3" if name == "F" else "-pi/3", "2.1")]
    return out


# -- 1 ------------------------------------------------------------------------------


def test_criterion_01_symplecticity(record_property):
    texts = _primitive_instances()
    texts += [print_canonical(Circuit((macro_example(name),))) for name in sorted(MACROS)]
    texts += ["SWAP(1,2);CNP(1,2);SWAP(1,2)", "F(1);CNP(1,2)", "F(1);CNM(1,2)", "CHAINP(1,2,3,4)", "CNPM(1,2);CNMM(2,1)"]
    worst, where = 0.0, ""
    for t in texts:
        e = element(parse(t))
        defect = e.symplectic_defect()
        if defect >= worst:
            worst, where = defect, t
    parts = [(worst <= SYMP, f"max |S^T J S - J| = {worst:.2e} over {len(texts)} elements (worst {where})")]
    verdict(record_property, 1, "symplecticity", parts)


# -- 2 ------------------------------------------------------------------------------


def test_criterion_02_swap_equivalence(record_property):
    parts = []
    pairs = [(a, b) for i, a in enumerate(SWAP_FORMS) for b in SWAP_FORMS[i + 1 :]]
    for a, b in pairs:
        ok, err = symp_compare(a, b)
        parts.append((ok, f"{a}~{b} symplectic {err:.1e}"))
    for a, b in pairs:
        res = fock_compare(a, b, 24, 16, FOCK)
        parts.append((meets(res.status, EQUAL_UP_TO_PHASE), f"{a}~{b} Fock(24,16) {res.max_error:.1e} phase {res.phase[0][0]:+.3f}{res.phase[0][1]:+.3f}i"))
    # CN- triple alone: (x, y) -> (-y, -x) for positions and momenta alike
    S = element(parse("CN3M(1,2)")).S
    P = np.zeros((4, 4))
    P[0, 2] = P[1, 3] = P[2, 0] = P[3, 1] = 1.0
    err = float(np.max(np.abs(S + P)))
    parts.append((err <= SYMP, f"CN- triple = -permutation {err:.1e}"))
    for first in ("CNP", "CNM"):
        t = state_transfer(0.8, r=0.5, first=first)
        parts.append((t.sigmas <= 3, f"transfer via {first} {t.sigmas:.2f} sigma"))
    verdict(record_property, 2, "SWAP equivalence", parts)


# -- 3 ------------------------------------------------------------------------------


def test_criterion_03_fock_swap_action(record_property):
    space = FockSpace(2, 24)
    idx = np.flatnonzero(guard_mask(space, 16))
    cols = circuit_columns(expand_macros(parse("SWAP(1,2)")), space, idx)
    expected = np.zeros_like(cols)
    for k, i in enumerate(idx):
        n, m = np.unravel_index(i, space.shape)
        expected[space.index((m, n)), k] = 1.0
    err = float(np.max(np.abs(cols - expected)))
    verdict(record_property, 3, "Fock SWAP action", [(err <= FOCK, f"strict-phase error {err:.1e} on n+m<=16, cutoff 24")])


# -- 4 ------------------------------------------------------------------------------


SELF_INVERSE = [
    ("NOT(1)", 1, (40, 24)),
    ("CNM(1,2)", 2, (24, 16)),
    ("CNN(1;2)", 2, (24, 16)),
    ("CNN(1,2;3)", 3, (12, 8)),
] + [(s, 2, (24, 16)) for s in SWAP_FORMS + ("SWAP(1,2)",)]


def test_criterion_04_self_inverse_and_hermiticity(record_property):
    parts = []
    for text, n, (cutoff, guard) in SELF_INVERSE:
        sq = f"{text};{text}"
        g = element(parse(sq), n)
        ok, err = equiv(g, GroupElement.identity(n), SYMP)
        parts.append((ok, f"{text}^2 symplectic {err:.1e}"))
        block = guarded_block(expand_macros(parse(sq)), FockSpace(n, cutoff), guard)
        ferr = float(np.max(np.abs(block - np.eye(block.shape[0]))))
        parts.append((ferr <= FOCK, f"{text}^2 Fock({cutoff},{guard}) {ferr:.1e}"))
    for text, n, (cutoff, guard) in SELF_INVERSE[:4]:
        h = hermiticity_defect(guarded_block(expand_macros(parse(text)), FockSpace(n, cutoff), guard))
        parts.append((h <= FOCK, f"{text} Hermitian {h:.1e}"))
    h = hermiticity_defect(guarded_block(expand_macros(parse("CNP(1,2)")), FockSpace(2, 24), 16))
    parts.append((h > 0.1, f"CNP Hermiticity defect {h:.2f}"))
    verdict(record_property, 4, "self-inverse gates", parts)


# -- 5 ------------------------------------------------------------------------------


def test_criterion_05_swap_conjugation(record_property):
    lhs, rhs = "SWAP(1,2);CNP(1,2);SWAP(1,2)", "CNP(2,1)"
    ok, err = symp_compare(lhs, rhs)
    res = fock_compare(lhs, rhs, 24, 16, FOCK)
    parts = [(ok, f"symplectic {err:.1e}"), (meets(res.status, EQUAL_UP_TO_PHASE), f"Fock(24,16) {res.max_error:.1e} {res.status}")]
    verdict(record_property, 5, "SWAP conjugation", parts)


# -- 6 ------------------------------------------------------------------------------


def test_criterion_06_cn_plus_triple(record_property):
    g = element(parse("CN3P(1,2)"))
    err = float(np.max(np.abs(g.position_block() - np.array([[2.0, 1.0], [3.0, 2.0]]))))
    leak = float(np.max(np.abs(g.S[0::2, 1::2])))
    verdict(record_property, 6, "CN+ triple", [(max(err, leak) <= SYMP, f"position block error {err:.1e}, x<-p leakage {leak:.1e}")])


# -- 7 ------------------------------------------------------------------------------


def test_criterion_07_cloning(record_property):
    a, b = "CLONE4(1,2,3)", "CLONERED(1,2,3)"
    ok, err = symp_compare(a, b)
    res = fock_compare(a, b, 12, 8, 1e-6)
    parts = [(ok, f"symplectic {err:.1e}"), (meets(res.status, EQUAL_UP_TO_PHASE), f"Fock(12,8) {res.max_error:.1e}")]
    verdict(record_property, 7, "cloning reduction", parts)


# -- 8 ------------------------------------------------------------------------------


def test_criterion_08_commutator(record_property):
    r = matrix_commutator_check(20, 10)
    parts = [
        (r.residual <= 1e-6, f"residual {r.residual:.1e}"),
        (r.commutator_norm > 0.1, f"|[A,B]| {r.commutator_norm:.3f}"),
    ]
    verdict(record_property, 8, "CN- commutator", parts)


# -- 9 ------------------------------------------------------------------------------


def test_criterion_09_hybrid_cn(record_property):
    cutoff = 32
    space = FockSpace(1, cutoff, 1)
    U = gate_unitary(expand_macros(parse("C[1]{ROT(1,pi)}")), space).matrix
    block = np.kron(np.diag([1.0, 0.0]), np.eye(cutoff)) + np.kron(np.diag([0.0, 1.0]), np.diag((-1.0) ** np.arange(cutoff)))
    err = float(np.max(np.abs(U - block)))
    res = cat_demo(1.5, 32)
    overlap = math.exp(-2 * 1.5**2)
    perr = max(abs(res.p_plus - (1 + overlap) / 2), abs(res.p_minus - (1 - overlap) / 2))
    parts = [
        (err <= 1e-10, f"block form {err:.1e}"),
        (min(res.fidelity_even, res.fidelity_odd) >= 1 - 1e-8, f"cat fidelities {res.fidelity_even:.12f}, {res.fidelity_odd:.12f}"),
        (perr <= 1e-8, f"outcome probabilities {perr:.1e}"),
    ]
    verdict(record_property, 9, "hybrid CN and cats", parts)


# -- 10 -----------------------------------------------------------------------------


def test_criterion_10_cswap(record_property):
    parts = []
    for five in ("CSWAP5(1,1,2)", "CSWAP5A(1,1,2)"):
        ok, err = symp_compare(five, "CSWAPD(1,1,2)")
        parts.append((ok, f"{five} symplectic {err:.1e}"))
        res = fock_compare(five, "CSWAPD(1,1,2)", 12, 8, 1e-6)
        phases = ", ".join(f"{complex(*p):.3f}" for p in res.phase)
        parts.append((meets(res.status, EQUAL_UP_TO_PHASE), f"{five} Fock(12,8) {res.max_error:.1e} phases {phases}"))
    ok, err = symp_compare("HJZCONJ(1,1,2)", "HJY(1,1,2)")
    parts.append((ok, f"Jz->Jy conjugation {err:.1e}"))
    verdict(record_property, 10, "CSWAP forms", parts)


# -- 11 -----------------------------------------------------------------------------


def test_criterion_11_braiding(record_property):
    grid = [(x, p) for x in (0.0, 0.7, -0.7) for p in (0.0, 0.7, -0.7)]
    parts = []
    for theta, label in ((math.pi / 2, "pi/2"), (math.pi / 6, "pi/6"), (0.0, "0")):
        worst = max(braiding_check(40, 24, x, p, theta).strict_error for x, p in grid)
        parts.append((worst <= 1e-4, f"theta={label} {worst:.1e}"))
    h = element(parse("CSWAP8(1,1,2,3)"))
    target = element(parse("XP(2,1,-1)"), 3)
    ok0, e0 = equiv(h.branch0, GroupElement.identity(3), 1e-10)
    ok1, e1 = equiv(h.branch1, target, 1e-10)
    parts.append((isinstance(h, HybridElement) and ok0, f"eight-factor branch0 {e0:.1e}"))
    parts.append((ok1, f"eight-factor branch1 {e1:.1e}"))
    fock = fock_compare("CSWAP8(1,1,2,3)", "C[1]{XP(2,1,-1)}", 24, 4, FOCK, n_modes=3)
    phases = ", ".join(f"{complex(*p):.4f}" for p in fock.phase)
    parts.append((True, f"eight-factor Fock(24,4) reported residual {fock.max_error:.1e} phases {phases}"))
    verdict(record_property, 11, "braiding identity", parts)


# -- 12 -----------------------------------------------------------------------------


def test_criterion_12_nullifiers(record_property):
    rs = (0.5, 1.0, 1.5)
    rows = nullifier_demo((0.0,) + rs)
    parts = []
    worst = max((abs(row.value / row.gaussian_prediction - 1), row.variance_name, row.r) for row in rows if row.r in rs)
    parts.append((worst[0] <= 0.05, f"max relative deviation {worst[0]:.2%} ({worst[1]} at r={worst[2]})"))
    names = sorted({row.variance_name for row in rows})
    for name in names:
        values = [row.value for row in sorted(rows, key=lambda r: r.r) if row.variance_name == name]
        ok = all(b < a for a, b in zip(values, values[1:]))
        if not ok:
            parts.append((False, f"{name} not monotone: {values}"))
    parts.append((True, f"{len(names)} variances decrease monotonically over r=0..1.5"))
    verdict(record_property, 12, "nullifier variances", parts)


# -- 13 -----------------------------------------------------------------------------

PARSE_ERRORS = [
    ("NOT(1,2)", "arity", 1, 1),
    ("FOO(1)", "unknown_gate", 1, 1),
    ("XP(2,2,1)", "repeated_mode", 1, 1),
    ("NOT(1);\nCNP(1 2)", "syntax", 2, 7),
    ("C[1]{C[1]{NOT(1)}}", "nesting", 1, 6),
]


def test_criterion_13_parser(record_property):
    bad = [name for name in sorted(MACROS) if not same_structure(parse(print_canonical(Circuit((macro_example(name),)))), Circuit((macro_example(name),)))]
    rng = np.random.default_rng(7)
    failures = 0
    for _ in range(1000):
        c = random_circuit(rng)
        failures += not same_structure(parse(print_canonical(c)), c)
    diag = 0
    for text, kind, line, col in PARSE_ERRORS:
        try:
            parse(text)
        except ParseError as e:
            diag += (e.kind, e.line, e.col) == (kind, line, col)
    parts = [
        (not bad, f"{len(MACROS) - len(bad)}/{len(MACROS)} macros round-trip"),
        (failures == 0, f"{1000 - failures}/1000 random circuits round-trip"),
        (diag == len(PARSE_ERRORS), f"{diag}/{len(PARSE_ERRORS)} error cases located"),
    ]
    verdict(record_property, 13, "parser", parts)


# -- 14 -----------------------------------------------------------------------------

ROUND_OFF = 1e-12


def _converges(coarse, fine):
    # residuals already at round-off cannot shrink further
    if coarse <= ROUND_OFF and fine <= ROUND_OFF:
        return True
    return fine <= coarse / 10


def _fock_residual(a, b, cutoff, guard, tol):
    return fock_compare(a, b, cutoff, guard, tol).max_error


@pytest.mark.parametrize("spot", ["swap", "clone", "commutator"])
def test_criterion_14_convergence(record_property, spot):
    if spot == "swap":
        cases = [(f"{a}~SWAPBS", lambda c, a=a: _fock_residual(a, "SWAPBS(1,2)", c, 16, FOCK)) for a in SWAP_FORMS[:2]]
        cutoffs = (24, 48)
    elif spot == "clone":
        cases = [("CLONE4~CLONERED", lambda c: _fock_residual("CLONE4(1,2,3)", "CLONERED(1,2,3)", c, 8, 1e-6))]
        cutoffs = (12, 24)
    else:
        cases = [("commutator", lambda c: matrix_commutator_check(c, 10).residual)]
        cutoffs = (20, 40)
    parts = []
    for label, fn in cases:
        coarse, fine = fn(cutoffs[0]), fn(cutoffs[1])
        parts.append((_converges(coarse, fine), f"{label} cutoff {cutoffs[0]}->{cutoffs[1]}: {coarse:.1e} -> {fine:.1e}"))
    verdict(record_property, f"14{'abc'[['swap', 'clone', 'commutator'].index(spot)]}", f"convergence ({spot})", parts)
