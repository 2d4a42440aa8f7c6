"""Canonical text form of circuits."""

from __future__ import annotations

import math
from fractions import Fraction

from ..circuit import Circuit, Conditioned, MacroRef, Primitive

_PI_TOL = 1e-12


def format_number(v: float) -> str:
    """Integers as integers, near pi-fractions as ``k*pi/m``, otherwise ``repr``."""
    v = float(v)
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    frac = Fraction(v / math.pi).limit_denominator(12)
    if frac != 0 and abs(v - float(frac) * math.pi) <= _PI_TOL:
        k, m = frac.numerator, frac.denominator
        sign = "-" if k < 0 else ""
        k = abs(k)
        num = "pi" if k == 1 else f"{k}*pi"
        return f"{sign}{num}" + (f"/{m}" if m != 1 else "")
    return repr(v)


def _term(t) -> str:
    if isinstance(t, Primitive):
        args = [str(m) for m in t.modes] + [format_number(p) for p in t.params]
        return f"{t.name}({','.join(args)})"
    if isinstance(t, Conditioned):
        return f"C[{t.qubit}]{{{print_canonical(t.body)}}}"
    if isinstance(t, MacroRef):
        return f"{t.name}(" + ";".join(",".join(format_number(a) for a in g) for g in t.args) + ")"
    raise TypeError(f"not a circuit term: {t!r}")


def print_canonical(c: Circuit) -> str:
    return ";".join(_term(t) for t in c.terms)
