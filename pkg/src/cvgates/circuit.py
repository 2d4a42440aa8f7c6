"""Circuit syntax tree shared by the DSL, the symplectic backend and the Fock backend.

Terms are stored in temporal order: ``terms[0]`` acts on the state first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

# name -> (number of mode arguments, required params, optional params)
PRIMITIVES: dict[str, tuple[int, int, int]] = {
    "NOT": (1, 0, 0),
    "ROT": (1, 1, 0),
    "F": (1, 0, 1),
    "XP": (2, 1, 0),
    "BS": (2, 1, 0),
    "BSX": (2, 1, 0),
}

DEFAULT_SIGMA = math.sqrt(2.0)


@dataclass(frozen=True)
class Primitive:
    name: str
    modes: tuple[int, ...]
    params: tuple[float, ...] = ()
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class MacroRef:
    """Unexpanded macro application; ``args`` holds the ';'-separated argument groups."""

    name: str
    args: tuple[tuple[float, ...], ...]
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Conditioned:
    """Body applied only when the control qubit is in ``|1>``."""

    qubit: int
    body: "Circuit"
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False)


Term = Union[Primitive, MacroRef, Conditioned]


@dataclass(frozen=True)
class Circuit:
    terms: tuple[Term, ...] = ()

    def __add__(self, other: "Circuit") -> "Circuit":
        return Circuit(self.terms + other.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    @property
    def is_expanded(self) -> bool:
        for t in self.terms:
            if isinstance(t, MacroRef):
                return False
            if isinstance(t, Conditioned) and not all(
                isinstance(b, Primitive) for b in t.body.terms
            ):
                return False
        return True

    def max_mode(self) -> int:
        m = 0
        for t in self.terms:
            if isinstance(t, Primitive):
                m = max(m, *t.modes)
            elif isinstance(t, Conditioned):
                m = max(m, t.body.max_mode())
            else:
                for group in t.args:
                    for a in group:
                        if float(a).is_integer():
                            m = max(m, int(a))
        return m

    def qubits(self) -> set[int]:
        out: set[int] = set()
        for t in self.terms:
            if isinstance(t, Conditioned):
                out.add(t.qubit)
        return out


def circuit(*terms: Term) -> Circuit:
    return Circuit(tuple(terms))


def prim(name: str, *args: float) -> Primitive:
    """Build a primitive from positional arguments, modes first."""
    n_modes = PRIMITIVES[name][0]
    modes = tuple(int(a) for a in args[:n_modes])
    params = tuple(float(a) for a in args[n_modes:])
    return Primitive(name, modes, params)


def same_structure(a: Circuit, b: Circuit, atol: float = 1e-12) -> bool:
    """Structural equality ignoring source positions; parameters compared to ``atol``."""
    if len(a.terms) != len(b.terms):
        return False
    for s, t in zip(a.terms, b.terms):
        if type(s) is not type(t):
            return False
        if isinstance(s, Primitive):
            if s.name != t.name or s.modes != t.modes or len(s.params) != len(t.params):
                return False
            if any(abs(x - y) > atol for x, y in zip(s.params, t.params)):
                return False
        elif isinstance(s, Conditioned):
            if s.qubit != t.qubit or not same_structure(s.body, t.body, atol):
                return False
        else:
            if s.name != t.name or len(s.args) != len(t.args):
                return False
            for g, h in zip(s.args, t.args):
                if len(g) != len(h) or any(abs(x - y) > atol for x, y in zip(g, h)):
                    return False
    return True
