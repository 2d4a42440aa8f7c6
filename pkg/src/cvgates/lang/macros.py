"""Macro table: every named gate construction, expanded to primitives in temporal order.

Operator products are usually written right-to-left (``A B`` applies ``B`` first);
expansions here list terms in the order they act, so ``CN_31 CN_21 CN_13 CN_12``
becomes ``CNM(1,2);CNM(1,3);CNM(2,1);CNM(3,1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from ..circuit import PRIMITIVES, Circuit, Conditioned, MacroRef, Primitive, Term, prim

PI = math.pi


class MacroError(ValueError):
    pass


@dataclass(frozen=True)
class MacroDef:
    """``slots`` lists argument kinds per ';'-group: 'q' qubit, 'm' mode, 'a' real parameter.

    A group written as ``('m*',)`` takes one or more modes.
    """

    name: str
    slots: tuple[tuple[str, ...], ...]
    expand: Callable[..., Circuit]
    identity: str
    distinct_modes: bool = True

    def arity_text(self) -> str:
        return ";".join(",".join(g) for g in self.slots)


def _m(name: str, *args) -> MacroRef:
    return MacroRef(name, (tuple(args),))


def C(q: int, *body: Term) -> Conditioned:
    return Conditioned(q, Circuit(tuple(body)))


def seq(*terms: Term) -> Circuit:
    return Circuit(tuple(terms))


def cnm(i, j):
    return seq(prim("XP", i, j, -1.0), prim("NOT", j))


def _chain(kind: str, control, *targets) -> Circuit:
    # CN_12 CN_13 ... CN_1N: the rightmost factor acts first
    return seq(*[_m(kind, control, t) for t in reversed(targets)])


def conditioned_shear8(q: int, a: int, b: int, c: float, anc: int) -> Circuit:
    """Two-body expansion of ``exp(i c x_a p_b P_q)`` through an ancilla mode.

    Uses ``e^{i x p sin t} = R e^{ix p_} R^+ e^{ip x_} R e^{-ix p_} R^+ e^{-ip x_}`` with
    ``x -> c x_a``, ``p -> p_b``, unsubscripted operators on the ancilla and
    ``R = exp(i pi/2 (1 - P_q) n_anc)`` (``sin t -> P_q``).
    """
    R = [prim("ROT", anc, PI / 2), C(q, prim("ROT", anc, -PI / 2))]
    Rd = [prim("ROT", anc, -PI / 2), C(q, prim("ROT", anc, PI / 2))]
    return seq(
        prim("XP", anc, b, 1.0),  # e^{-i p_b x_anc}
        *Rd,
        prim("XP", a, anc, c),  # e^{-i c x_a p_anc}
        *R,
        prim("XP", anc, b, -1.0),  # e^{i p_b x_anc}
        *Rd,
        prim("XP", a, anc, -c),  # e^{i c x_a p_anc}
        *R,
    )


MACROS: dict[str, MacroDef] = {}


def _def(name, slots, identity, distinct=True):
    def deco(fn):
        MACROS[name] = MacroDef(name, slots, fn, identity, distinct)
        return fn

    return deco


@_def("NOTg", (("m",),), "NOT = (-1)^{a^dag a}")
def _notg(i):
    return seq(prim("NOT", i))


@_def("CNP", (("m", "m"),), "CN+_ij = exp(-i x_i p_j)")
def _cnp(i, j):
    return seq(prim("XP", i, j, 1.0))


@_def("CNM", (("m", "m"),), "CN-_ij = NOT_j exp(i x_i p_j) = exp(-i x_i p_j) NOT_j")
def _cnm(i, j):
    return cnm(i, j)


@_def("CNPM", (("m", "m"),), "momentum-basis CN+_ij = exp(i x_j p_i)")
def _cnpm(i, j):
    return seq(prim("XP", j, i, -1.0))


@_def("CNMM", (("m", "m"),), "momentum-basis CN-_ij = NOT_j exp(-i x_j p_i)")
def _cnmm(i, j):
    return seq(prim("XP", j, i, 1.0), prim("NOT", j))


@_def("B", (("m", "m"),), "B_ij = exp(i pi/2 (x_i p_j - x_j p_i))")
def _b(i, j):
    return seq(prim("BS", i, j, PI / 2))


@_def("SWAPBS", (("m", "m"),), "SWAP_ij = NOT_j B_ij")
def _swapbs(i, j):
    return seq(_m("B", i, j), prim("NOT", j))


@_def("SWAP", (("m", "m"),), "SWAP_ij (beam-splitter form)")
def _swap(i, j):
    return seq(_m("SWAPBS", i, j))


@_def("SWAP3CN", (("m", "m"),), "SWAP_ij = NOT_i NOT_j CN-_ij CN-_ji CN-_ij")
def _swap3cn(i, j):
    return seq(_m("CNM", i, j), _m("CNM", j, i), _m("CNM", i, j), prim("NOT", i), prim("NOT", j))


@_def("SWAPMIX", (("m", "m"),), "SWAP_ij = NOT_j CN-_ij CN-_ji CN+_ij")
def _swapmix(i, j):
    return seq(_m("CNP", i, j), _m("CNM", j, i), _m("CNM", i, j), prim("NOT", j))


@_def("SWAPEXP", (("m", "m"),), "SWAP_ij = e^{i x_i p_j} NOT_i e^{i x_j p_i} e^{-i x_i p_j}")
def _swapexp(i, j):
    return seq(prim("XP", i, j, 1.0), prim("XP", j, i, -1.0), prim("NOT", i), prim("XP", i, j, -1.0))


@_def("CN3P", (("m", "m"),), "CN+_ij CN+_ji CN+_ij |x,y> = |2x+y, 3x+2y>")
def _cn3p(i, j):
    return seq(_m("CNP", i, j), _m("CNP", j, i), _m("CNP", i, j))


@_def("CN3M", (("m", "m"),), "CN-_ij CN-_ji CN-_ij |x,y> = |-y, -x>")
def _cn3m(i, j):
    return seq(_m("CNM", i, j), _m("CNM", j, i), _m("CNM", i, j))


@_def("DCNP", (("m", "m"),), "double CN: CN-_ji CN+_ij |x, 0> = |0, x>")
def _dcnp(i, j):
    return seq(_m("CNP", i, j), _m("CNM", j, i))


@_def("DCNM", (("m", "m"),), "double CN: CN-_ji CN-_ij |x, 0> = |0, x>")
def _dcnm(i, j):
    return seq(_m("CNM", i, j), _m("CNM", j, i))


@_def("CNN", (("m*",), ("m",)), "controlled^n-NOT = NOT_t exp(i p_t sum_n x_n)")
def _cnn(controls, target):
    return seq(*[prim("XP", c, target, -1.0) for c in controls], prim("NOT", target))


@_def("CHAINP", (("m*",),), "CN+_12 CN+_13 ... CN+_1N")
def _chainp(modes):
    if len(modes) < 2:
        raise MacroError("CHAINP needs a control and at least one target")
    return _chain("CNP", *modes)


@_def("CHAINM", (("m*",),), "CN-_12 CN-_13 ... CN-_1N")
def _chainm(modes):
    if len(modes) < 2:
        raise MacroError("CHAINM needs a control and at least one target")
    return _chain("CNM", *modes)


@_def("CLONE4", (("m", "m", "m"),), "C' = CN-_31 CN-_21 CN-_13 CN-_12")
def _clone4(a, b, c):
    return seq(_m("CNM", a, b), _m("CNM", a, c), _m("CNM", b, a), _m("CNM", c, a))


@_def("CLONERED", (("m", "m", "m"),), "C' = e^{-i(x3 - x2) p1} e^{-i x1 (p2 + p3)} NOT_2 NOT_3")
def _clonered(a, b, c):
    return seq(
        prim("NOT", b),
        prim("NOT", c),
        prim("XP", a, b, 1.0),
        prim("XP", a, c, 1.0),
        prim("XP", c, a, 1.0),
        prim("XP", b, a, -1.0),
    )


@_def("HCN", (("q", "m"),), "hybrid CN = exp(-i pi a^dag a P_q)")
def _hcn(q, i):
    return seq(C(q, prim("ROT", i, PI)))


@_def("HJZ", (("q", "m", "m"),), "U = exp(i pi J_z P_q)")
def _hjz(q, i, j):
    return seq(C(q, prim("ROT", i, PI / 2), prim("ROT", j, -PI / 2)))


@_def("HJY", (("q", "m", "m"),), "U' = exp(i pi J_y P_q) = exp(i pi/2 (x_i p_j - x_j p_i) P_q)")
def _hjy(q, i, j):
    return seq(C(q, prim("BS", i, j, PI / 2)))


@_def("HJZCONJ", (("q", "m", "m"),), "U' = e^{i pi/2 J_x} U e^{-i pi/2 J_x}")
def _hjzconj(q, i, j):
    return seq(prim("BSX", i, j, -PI / 4), _m_q("HJZ", q, i, j), prim("BSX", i, j, PI / 4))


@_def("CSWAPD", (("q", "m", "m"),), "CSWAP = P0 + P1 SWAP")
def _cswapd(q, i, j):
    return seq(C(q, _m("SWAPBS", i, j)))


@_def("CSWAP2", (("q", "m", "m"),), "CSWAP = e^{i pi n_j P} e^{i pi/2 (x_i p_j - x_j p_i) P}")
def _cswap2(q, i, j):
    return seq(C(q, prim("BS", i, j, PI / 2)), C(q, prim("ROT", j, PI)))


@_def("CSWAP5A", (("q", "m", "m"),), "CSWAP = e^{i pi n_j P} e^{i pi/2 J_x} e^{i pi J_z P} e^{-i pi/2 J_x}")
def _cswap5a(q, i, j):
    return seq(
        prim("BSX", i, j, -PI / 4),
        C(q, prim("ROT", j, -PI / 2)),
        C(q, prim("ROT", i, PI / 2)),
        prim("BSX", i, j, PI / 4),
        C(q, prim("ROT", j, PI)),
    )


@_def(
    "CSWAP5",
    (("q", "m", "m"),),
    "CSWAP = e^{i pi/2 n_j P} e^{-i pi/2 n_i P} e^{i pi/4 X} e^{i pi n_i P} e^{-i pi/4 X}, X = a_i^dag a_j + h.c.",
)
def _cswap5(q, i, j):
    return seq(
        prim("BSX", i, j, -PI / 4),
        C(q, prim("ROT", i, PI)),
        prim("BSX", i, j, PI / 4),
        C(q, prim("ROT", i, -PI / 2)),
        C(q, prim("ROT", j, PI / 2)),
    )


@_def("CXP8", (("q", "m", "m", "m"), ("a",)), "exp(i c x_a p_b P) via eight two-body factors on an ancilla")
def _cxp8(q, a, b, anc, c):
    return conditioned_shear8(q, a, b, c, anc)


@_def("CSWAP8", (("q", "m", "m", "m"),), "exp(i p_i x_j P) = eight two-body factors with an ancilla")
def _cswap8(q, i, j, anc):
    return conditioned_shear8(q, j, i, 1.0, anc)


@_def("CSWAP3B", (("q", "m", "m"),), "CSWAP = e^{i x_i p_j P} e^{i pi n_i P} e^{i x_j p_i P} e^{-i x_i p_j P}")
def _cswap3b(q, i, j):
    return seq(
        C(q, prim("XP", i, j, 1.0)),
        C(q, prim("XP", j, i, -1.0)),
        C(q, prim("ROT", i, PI)),
        C(q, prim("XP", i, j, -1.0)),
    )


@_def("CSWAPSW", (("q", "m", "m", "m"),), "CSWAP3B with each three-body shear expanded through the ancilla")
def _cswapsw(q, i, j, anc):
    return (
        conditioned_shear8(q, i, j, -1.0, anc)
        + conditioned_shear8(q, j, i, 1.0, anc)
        + seq(C(q, prim("ROT", i, PI)))
        + conditioned_shear8(q, i, j, 1.0, anc)
    )


def _m_q(name: str, q, *modes) -> MacroRef:
    return MacroRef(name, ((q,) + tuple(modes),))


def bind_args(mdef: MacroDef, args: tuple[tuple[float, ...], ...]) -> tuple:
    """Validate argument groups against the slot signature; returns positional call args."""
    if len(args) != len(mdef.slots):
        raise MacroError(f"{mdef.name} expects {len(mdef.slots)} argument group(s) ({mdef.arity_text()}), got {len(args)}")
    out = []
    modes: list[int] = []
    for group, kinds in zip(args, mdef.slots):
        if kinds == ("m*",):
            if not group:
                raise MacroError(f"{mdef.name} needs at least one mode in a variadic group")
            vals = [_as_index(v, mdef.name) for v in group]
            modes.extend(vals)
            out.append(tuple(vals))
            continue
        if len(group) != len(kinds):
            raise MacroError(f"{mdef.name} expects arguments ({mdef.arity_text()}), got {len(group)} in a group")
        for v, k in zip(group, kinds):
            if k == "a":
                out.append(float(v))
            else:
                idx = _as_index(v, mdef.name)
                if k == "m":
                    modes.append(idx)
                out.append(idx)
    if mdef.distinct_modes and len(set(modes)) != len(modes):
        raise MacroError(f"{mdef.name} needs distinct modes, got {tuple(modes)}")
    return tuple(out)


def _as_index(v, name: str) -> int:
    if not float(v).is_integer() or v < 1:
        raise MacroError(f"{name}: index arguments must be positive integers, got {v}")
    return int(v)


def expand_macros(c: Circuit, _depth: int = 0) -> Circuit:
    """Expand every macro reference to primitives and primitive-bodied conditioned blocks.

    Idempotent on already-expanded circuits.
    """
    if _depth > 32:
        raise MacroError("macro expansion too deep (cyclic definition?)")
    out: list[Term] = []
    for t in c.terms:
        if isinstance(t, Primitive):
            if t.name not in PRIMITIVES:
                raise MacroError(f"unknown primitive {t.name!r}")
            out.append(t)
        elif isinstance(t, Conditioned):
            body = expand_macros(t.body, _depth + 1)
            if any(isinstance(b, Conditioned) for b in body.terms):
                raise MacroError("conditioned blocks cannot be nested")
            out.append(Conditioned(t.qubit, body, t.pos))
        else:
            mdef = MACROS.get(t.name)
            if mdef is None:
                raise MacroError(f"unknown macro {t.name!r}")
            sub = mdef.expand(*bind_args(mdef, t.args))
            out.extend(expand_macros(sub, _depth + 1).terms)
    return Circuit(tuple(out))


def macro(name: str, *args, groups: tuple | None = None) -> MacroRef:
    """Build a macro reference; ``groups`` overrides the single flat argument group."""
    return MacroRef(name, tuple(tuple(g) for g in groups) if groups else (tuple(args),))
