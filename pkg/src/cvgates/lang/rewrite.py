"""Pattern rewrites on expanded circuits."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional

from ..circuit import Circuit, prim, same_structure
from .macros import expand_macros, macro, seq


class NoMatchError(ValueError):
    pass


@dataclass(frozen=True)
class RewriteRule:
    """``lhs`` and ``rhs`` build circuit fragments from ``n_slots`` distinct mode labels."""

    name: str
    n_slots: int
    lhs: Callable[..., Circuit]
    rhs: Callable[..., Circuit]
    identity: str = ""

    def reversed(self) -> "RewriteRule":
        return RewriteRule(self.name + "~", self.n_slots, self.rhs, self.lhs, self.identity)

    def instance(self, *modes: int) -> tuple[Circuit, Circuit]:
        return self.lhs(*modes), self.rhs(*modes)


def match_at(c: Circuit, rule: RewriteRule, position: int) -> Optional[tuple[int, ...]]:
    """First slot binding under which the expanded ``lhs`` occurs at ``position``."""
    terms = expand_macros(c).terms
    universe = range(1, max(c.max_mode(), rule.n_slots) + 1)
    for binding in itertools.permutations(universe, rule.n_slots):
        pattern = expand_macros(rule.lhs(*binding)).terms
        window = terms[position : position + len(pattern)]
        if pattern and len(window) == len(pattern) and same_structure(Circuit(window), Circuit(pattern)):
            return binding
    return None


def rewrite_apply(c: Circuit, rule: RewriteRule, position: int) -> Circuit:
    """Replace the match of ``rule.lhs`` at term ``position`` of the expanded circuit by ``rhs``."""
    terms = expand_macros(c).terms
    if not 0 <= position < len(terms):
        raise NoMatchError(f"position {position} outside the expanded circuit (length {len(terms)})")
    binding = match_at(c, rule, position)
    if binding is None:
        raise NoMatchError(f"rule {rule.name} does not match at position {position}")
    n = len(expand_macros(rule.lhs(*binding)).terms)
    rhs = expand_macros(rule.rhs(*binding)).terms
    return Circuit(terms[:position] + rhs + terms[position + n :])


def find_matches(c: Circuit, rule: RewriteRule) -> list[int]:
    return [k for k in range(len(expand_macros(c).terms)) if match_at(c, rule, k) is not None]


def _empty(*_):
    return Circuit(())


RULES: dict[str, RewriteRule] = {
    r.name: r
    for r in [
        RewriteRule(
            "swap_conjugation",
            2,
            lambda a, b: seq(macro("SWAP", a, b), macro("CNP", a, b), macro("SWAP", a, b)),
            lambda a, b: seq(macro("CNP", b, a)),
            "SWAP_ab CN+_ab SWAP_ab = CN+_ba",
        ),
        RewriteRule(
            "not_past_shear_minus",
            2,
            lambda a, b: seq(prim("NOT", b), prim("XP", a, b, -1.0)),
            lambda a, b: seq(prim("XP", a, b, 1.0), prim("NOT", b)),
            "e^{i x_a p_b} NOT_b = NOT_b e^{-i x_a p_b}",
        ),
        RewriteRule(
            "not_past_shear_plus",
            2,
            lambda a, b: seq(prim("NOT", b), prim("XP", a, b, 1.0)),
            lambda a, b: seq(prim("XP", a, b, -1.0), prim("NOT", b)),
            "CN-_ab = NOT_b e^{i x_a p_b} = e^{-i x_a p_b} NOT_b",
        ),
        RewriteRule("not_squared", 1, lambda a: seq(prim("NOT", a), prim("NOT", a)), _empty, "NOT^2 = 1"),
        RewriteRule("cnm_squared", 2, lambda a, b: seq(macro("CNM", a, b), macro("CNM", a, b)), _empty, "(CN-)^2 = 1"),
        RewriteRule(
            "cnn2_squared",
            2,
            lambda a, t: seq(*[macro("CNN", groups=((a,), (t,)))] * 2),
            _empty,
            "controlled^n-NOT is self-inverse (one control)",
        ),
        RewriteRule(
            "cnn3_squared",
            3,
            lambda a, b, t: seq(*[macro("CNN", groups=((a, b), (t,)))] * 2),
            _empty,
            "controlled^n-NOT is self-inverse (two controls)",
        ),
        RewriteRule(
            "swap_forms",
            2,
            lambda a, b: seq(macro("SWAP3CN", a, b)),
            lambda a, b: seq(macro("SWAPBS", a, b)),
            "NOT_a NOT_b CN-_ab CN-_ba CN-_ab = NOT_b B_ab",
        ),
    ]
}
