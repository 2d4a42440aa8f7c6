import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvgates.circuit import Circuit, prim
from cvgates.fock import FockSpace, circuit_columns, expm_unitary, guard_mask, hermite_functions
from cvgates.fock.kernels import fourier_matrix
from cvgates.fock.space import embed, single_mode_ops
from cvgates.lang import element, parse
from cvgates.phase_space import (
    GroupElement,
    HybridElement,
    ModeMismatchError,
    QuadForm,
    compose,
    displacement_element,
    element_of_circuit,
    element_of_gate,
    equiv,
    heisenberg_map,
    hybrid_compose,
    inverse,
    symplectic_form,
)

TOL = 1e-12


def el(text, n_modes=None):
    return element(parse(text), n_modes)


# -- oracles ------------------------------------------------------------------


def fock_heisenberg_fit(term, n_modes, cutoff=40, guard=6):
    """Fit U^dag xi_k U on a low-excitation block with truncated quadrature matrices.

    Returns the fitted S and d from the guarded matrix elements, treating the
    truncated x and p as the quadrature basis.
    """
    space = FockSpace(n_modes, cutoff)
    _, x, p, _ = single_mode_ops(cutoff)
    idx = np.flatnonzero(guard_mask(space, guard))
    U = circuit_columns(Circuit((term,)), space, idx)
    quads = []
    for m in range(1, n_modes + 1):
        quads += [embed(space, x, m), embed(space, p, m)]
    blocks = [Q[np.ix_(idx, idx)] for Q in quads]
    # regress each conjugated quadrature onto the guarded quadratures plus identity
    basis = np.stack([b.ravel() for b in blocks] + [np.eye(idx.size).ravel()], axis=1)
    S = np.zeros((2 * n_modes, 2 * n_modes))
    d = np.zeros(2 * n_modes)
    resid = 0.0
    for k, Q in enumerate(quads):
        target = (U.conj().T @ Q @ U).ravel()
        coef, *_ = np.linalg.lstsq(basis, target, rcond=None)
        resid = max(resid, float(np.max(np.abs(basis @ coef - target))))
        S[k] = coef[:-1].real
        d[k] = coef[-1].real
    return S, d, resid


def fourier_kernel_matrix(sigma, n_max=6, half_width=9.0, points=801):
    """Number-basis matrix of the kernel e^{2ixy/sigma^2}/(sigma sqrt(pi)) by grid quadrature."""
    y = np.linspace(-half_width, half_width, points)
    h = y[1] - y[0]
    psi = hermite_functions(n_max + 1, y)  # rows are n, columns are grid points
    K = np.exp(2j * np.outer(y, y) / sigma**2) / (sigma * math.sqrt(math.pi))
    return psi @ K @ psi.T * h * h


# -- element_of_gate -----------------------------------------------------------


def test_not_element():
    g = element_of_gate(prim("NOT", 1), 1)
    assert np.array_equal(g.S, -np.eye(2))
    assert np.array_equal(g.d, np.zeros(2))


def test_rot_pi_equals_not():
    ok, err = equiv(element_of_gate(prim("ROT", 1, math.pi), 1), element_of_gate(prim("NOT", 1), 1))
    assert ok, err


def test_beam_splitter_quarter_turn():
    S = el("BS(1,2,pi/2)").S
    x1, p1, x2, p2 = np.eye(4)
    assert np.allclose(S[0], x2, atol=TOL)
    assert np.allclose(S[1], p2, atol=TOL)
    assert np.allclose(S[2], -x1, atol=TOL)
    assert np.allclose(S[3], -p1, atol=TOL)


def test_xp_shear_rows():
    S = el("XP(1,2,1)").S
    expected = np.eye(4)
    expected[2, 0] = 1.0  # x2 -> x2 + x1
    expected[1, 3] = -1.0  # p1 -> p1 - p2
    assert np.allclose(S, expected, atol=TOL)


@pytest.mark.parametrize(
    "term,n_modes",
    [
        (prim("NOT", 1), 1),
        (prim("ROT", 1, 0.7), 1),
        (prim("F", 1), 1),
        (prim("F", 1, 1.0), 1),
        (prim("XP", 1, 2, 1.0), 2),
        (prim("XP", 2, 1, -0.5), 2),
        (prim("BS", 1, 2, 0.4), 2),
        (prim("BSX", 1, 2, -0.3), 2),
    ],
    ids=lambda v: getattr(v, "name", str(v)),
)
def test_element_matches_fock_conjugation(term, n_modes):
    # squeezing in F(sigma != sqrt 2) needs a larger single-mode cutoff
    cutoff = 80 if n_modes == 1 else 36
    S_fit, d_fit, resid = fock_heisenberg_fit(term, n_modes, cutoff=cutoff)
    g = element_of_gate(term, n_modes)
    assert resid < 1e-6
    assert np.max(np.abs(S_fit - g.S)) < 1e-6
    assert np.max(np.abs(d_fit - g.d)) < 1e-6


@pytest.mark.parametrize("sigma", [math.sqrt(2.0), 1.0, 1.6])
def test_fourier_matches_kernel_integral(sigma):
    n_max = 6
    oracle = fourier_kernel_matrix(sigma, n_max)
    F = fourier_matrix(60, sigma)[: n_max + 1, : n_max + 1]
    assert np.max(np.abs(F - oracle)) < 1e-6


def test_default_fourier_is_quarter_turn_in_fock_space():
    F = fourier_matrix(16, math.sqrt(2.0))
    assert np.allclose(F, np.diag(1j ** np.arange(16)), atol=1e-14)


def test_fourier_maps_position_to_scaled_momentum():
    sigma = 1.3
    S = element_of_gate(prim("F", 1, sigma), 1).S
    # an x-eigenstate with eigenvalue x lands on a p-eigenstate with eigenvalue 2x/sigma^2
    v = S @ np.array([0.8, 0.0])
    assert v[1] == pytest.approx(2 * 0.8 / sigma**2)


def test_element_errors():
    with pytest.raises(ValueError):
        element_of_gate(prim("NOT", 3), 2)
    with pytest.raises(ValueError):
        element_of_gate(prim("XP", 1, 1, 1.0), 2)
    with pytest.raises(ValueError):
        element_of_gate(prim("F", 1, -1.0), 1)
    from cvgates.circuit import Primitive

    with pytest.raises(ValueError):
        element_of_gate(Primitive("FOO", (1,)), 1)


# -- compose / inverse / heisenberg_map ----------------------------------------


def test_compose_identity():
    g = el("XP(1,2,0.3);BS(1,2,0.2)")
    ok, _ = equiv(compose(GroupElement.identity(2), g), g)
    assert ok


def test_swap_is_permutation():
    S = compose(el("BS(1,2,pi/2)"), el("NOT(2)", 2)).S
    P = np.zeros((4, 4))
    P[0, 2] = P[1, 3] = P[2, 0] = P[3, 1] = 1.0
    assert np.allclose(S, P, atol=TOL)


def test_cn_plus_triple_position_sector():
    g = el("CNP(1,2);CNP(2,1);CNP(1,2)")
    assert np.allclose(g.position_block(), [[2, 1], [3, 2]], atol=TOL)
    assert np.allclose(g.S[0::2, 1::2], 0.0)


def test_compose_order():
    f, x = element_of_gate(prim("F", 1), 2), element_of_gate(prim("XP", 1, 2, 1.0), 2)
    ok, _ = equiv(compose(f, x), el("F(1);XP(1,2,1)"))
    assert ok
    assert not equiv(compose(x, f), compose(f, x))[0]


def test_inverse_examples():
    assert equiv(inverse(GroupElement.identity(2)), GroupElement.identity(2))[0]
    n = el("NOT(1)")
    assert equiv(inverse(n), n)[0]
    assert equiv(inverse(el("XP(1,2,1)")), el("XP(1,2,-1)"))[0]


def test_mode_mismatch():
    with pytest.raises(ModeMismatchError):
        compose(GroupElement.identity(1), GroupElement.identity(2))
    with pytest.raises(ModeMismatchError):
        heisenberg_map(GroupElement.identity(1), QuadForm(np.zeros(4)))
    with pytest.raises(ModeMismatchError):
        hybrid_compose(HybridElement.lift(GroupElement.identity(1), 1), HybridElement.lift(GroupElement.identity(1), 2))


def test_heisenberg_identity_and_swap():
    f = QuadForm.from_terms(2, {"p1": 1.0})
    same = heisenberg_map(GroupElement.identity(2), f)
    assert np.array_equal(same.coeffs, f.coeffs)
    swapped = heisenberg_map(el("SWAP(1,2)"), f)
    assert np.allclose(swapped.coeffs, QuadForm.from_terms(2, {"p2": 1.0}).coeffs, atol=TOL)


def test_heisenberg_nullifier():
    diff = QuadForm.from_terms(2, {"x1": 1.0, "x2": -1.0})
    out = heisenberg_map(el("CNP(1,2)"), diff)
    assert np.allclose(out.coeffs, QuadForm.from_terms(2, {"x2": -1.0}).coeffs, atol=TOL)
    # with F on mode 1 first, the input y in x2 gives the eigenvalue -y
    out = heisenberg_map(el("F(1);CNP(1,2)"), diff)
    assert np.allclose(out.coeffs, QuadForm.from_terms(2, {"x2": -1.0}).coeffs, atol=TOL)


def test_heisenberg_constant_uses_displacement():
    g = displacement_element(1, 1, x=0.5, p=0.25)
    out = heisenberg_map(g, QuadForm.from_terms(1, {"x1": 1.0, "p1": 2.0}))
    assert out.constant == pytest.approx(-0.5 + 0.5)


def test_displacement_matches_fock_conjugation():
    # e^{i x0 p} shifts x by -x0 in U^dag x U
    cutoff, guard = 40, 8
    _, X, P, _ = single_mode_ops(cutoff)
    x0, p0 = 0.4, -0.3
    U = expm_unitary(1j * x0 * P) @ expm_unitary(1j * p0 * X)
    g = displacement_element(1, 1, x=x0, p=p0)
    lhs = (U.conj().T @ X @ U)[: guard + 1, : guard + 1]
    assert np.max(np.abs(lhs - (X + g.d[0] * np.eye(cutoff))[: guard + 1, : guard + 1])) < 1e-6
    lhs = (U.conj().T @ P @ U)[: guard + 1, : guard + 1]
    assert np.max(np.abs(lhs - (P + g.d[1] * np.eye(cutoff))[: guard + 1, : guard + 1])) < 1e-6


# -- hybrid ----------------------------------------------------------------------


def test_hybrid_compose_unconditioned_is_lifted_compose():
    a, b = el("XP(1,2,1)"), el("BS(1,2,0.3)")
    h = hybrid_compose(a, b)
    assert equiv(h.branch0, compose(a, b))[0] and equiv(h.branch1, compose(a, b))[0]


def test_five_factor_cswap_branches():
    h = el("CSWAP5(1,1,2)")
    assert isinstance(h, HybridElement)
    assert equiv(h.branch0, GroupElement.identity(2))[0]
    assert equiv(h.branch1, el("SWAP(1,2)"))[0]


def test_eight_factor_branches_with_ancilla():
    h = el("CSWAP8(1,1,2,3)")
    target = el("XP(2,1,-1)", 3)  # e^{i x2 p1}
    assert equiv(h.branch0, GroupElement.identity(3), 1e-10)[0]
    assert equiv(h.branch1, target, 1e-10)[0]


def test_equiv_examples():
    g = el("CNP(1,2)")
    assert equiv(g, g) == (True, 0.0)
    assert equiv(el("CNM(1,2);CNM(2,1);CNM(1,2);NOT(1);NOT(2)"), el("B(1,2);NOT(2)"))[0]
    assert not equiv(el("CNP(1,2)"), el("CNM(1,2)"))[0]


def test_equiv_shape_mismatch():
    with pytest.raises(ModeMismatchError):
        equiv(GroupElement.identity(1), GroupElement.identity(2))


def test_group_element_validates_shape():
    with pytest.raises(ValueError):
        GroupElement(2, np.eye(2), np.zeros(4))


def test_element_of_circuit_rejects_macros():
    with pytest.raises(ValueError):
        element_of_circuit(parse("SWAP(1,2)"))


# -- properties ------------------------------------------------------------------

N_MODES = 3
angles = st.floats(-3.2, 3.2, allow_nan=False)
pairs = st.tuples(st.integers(1, N_MODES), st.integers(1, N_MODES)).filter(lambda t: t[0] != t[1])


@st.composite
def primitives(draw):
    kind = draw(st.sampled_from(["NOT", "ROT", "F", "XP", "BS", "BSX"]))
    if kind == "NOT":
        return prim("NOT", draw(st.integers(1, N_MODES)))
    if kind == "ROT":
        return prim("ROT", draw(st.integers(1, N_MODES)), draw(angles))
    if kind == "F":
        return prim("F", draw(st.integers(1, N_MODES)), draw(st.floats(0.5, 2.0)))
    i, j = draw(pairs)
    return prim(kind, i, j, draw(st.floats(-2.0, 2.0)))


@settings(max_examples=60, deadline=None)
@given(st.lists(primitives(), min_size=1, max_size=8))
def test_composed_elements_are_symplectic(terms):
    g = element_of_circuit(Circuit(tuple(terms)), N_MODES)
    J = symplectic_form(N_MODES)
    scale = max(1.0, float(np.max(np.abs(g.S))) ** 2)
    assert np.max(np.abs(g.S.T @ J @ g.S - J)) <= TOL * scale


@settings(max_examples=60, deadline=None)
@given(primitives(), primitives(), primitives())
def test_compose_is_associative(a, b, c):
    ga, gb, gc = (element_of_gate(t, N_MODES) for t in (a, b, c))
    left = compose(compose(ga, gb), gc)
    right = compose(ga, compose(gb, gc))
    assert equiv(left, right, TOL * 100)[0]


@settings(max_examples=60, deadline=None)
@given(st.lists(primitives(), min_size=1, max_size=5), st.floats(-1, 1), st.floats(-1, 1))
def test_inverse_is_two_sided(terms, x, p):
    g = compose(element_of_circuit(Circuit(tuple(terms)), N_MODES), displacement_element(N_MODES, 1, x, p))
    ident = GroupElement.identity(N_MODES)
    tol = 1e-12 * max(1.0, float(np.max(np.abs(g.S))) ** 2)
    assert equiv(compose(g, inverse(g)), ident, tol)[0]
    assert equiv(compose(inverse(g), g), ident, tol)[0]


@pytest.mark.parametrize(
    "text",
    ["NOT(1)", "CNM(1,2)", "CNN(1;2)", "CNN(1,2;3)", "SWAP3CN(1,2)", "SWAPBS(1,2)", "SWAPMIX(1,2)", "SWAP(1,2)"],
)
def test_self_inverse_elements(text):
    g = el(text, 3)
    assert equiv(compose(g, g), GroupElement.identity(3))[0]


def test_beam_splitter_b_position_and_momentum_agree():
    # |x>|y> -> |y>|-x> means x1 -> x2, x2 -> -x1 in the Heisenberg picture
    S = el("B(1,2)").S
    rot = np.array([[0.0, 1.0], [-1.0, 0.0]])
    assert np.allclose(S[0::2, 0::2], rot, atol=TOL)
    # the momenta rotate the same way; the inverse map sends (p1, p2) to (-p2, p1)
    assert np.allclose(S[1::2, 1::2], rot, atol=TOL)
    assert np.allclose(inverse(el("B(1,2)")).S[1::2, 1::2], rot.T, atol=TOL)
    assert np.allclose(S[0::2, 1::2], 0.0) and np.allclose(S[1::2, 0::2], 0.0)
