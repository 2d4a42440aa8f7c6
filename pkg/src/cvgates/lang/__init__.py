"""Gate DSL: parser, printer, macro table, rewrites and equivalence checking."""

from .equivalence import (
    EQUAL,
    EQUAL_UP_TO_PHASE,
    NOT_EQUAL,
    REPORTED,
    EquivalencePolicy,
    UniverseError,
    VerificationCheck,
    check_equivalence,
    element,
    meets,
)
from .macros import MACROS, MacroDef, MacroError, expand_macros, macro
from .parser import ParseError, parse, tokenize
from .printer import format_number, print_canonical
from .rewrite import RULES, NoMatchError, RewriteRule, find_matches, match_at, rewrite_apply

__all__ = [
    "EQUAL",
    "EQUAL_UP_TO_PHASE",
    "EquivalencePolicy",
    "MACROS",
    "MacroDef",
    "MacroError",
    "NOT_EQUAL",
    "NoMatchError",
    "ParseError",
    "REPORTED",
    "RULES",
    "RewriteRule",
    "UniverseError",
    "VerificationCheck",
    "check_equivalence",
    "element",
    "expand_macros",
    "find_matches",
    "format_number",
    "macro",
    "match_at",
    "meets",
    "parse",
    "print_canonical",
    "rewrite_apply",
    "tokenize",
]
