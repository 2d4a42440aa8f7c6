"""Recursive-descent parser for the gate DSL.

Grammar::

    circuit := [term (';' term)*]
    term    := NAME '(' group (';' group)* ')'  |  'C' '[' INT ']' '{' circuit '}'
    group   := expr (',' expr)*
    expr    := ['+'|'-'] prod (('+'|'-') prod)*
    prod    := unary (('*'|'/') unary)*
    unary   := '-' unary | atom
    atom    := NUMBER | 'pi' | 'sqrt' '(' expr ')' | '(' expr ')'

Mode and qubit indices are 1-based integers; parameters are real expressions.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from ..circuit import PRIMITIVES, Circuit, Conditioned, MacroRef, Primitive, Term
from .macros import MACROS, MacroError, bind_args


class ParseError(ValueError):
    """Diagnostic with a 1-based source position and a coarse ``kind``."""

    def __init__(self, message: str, line: int, col: int, kind: str = "syntax"):
        self.message, self.line, self.col, self.kind = message, line, col, kind
        super().__init__(f"line {line}, column {col}: {message}")


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/(),;\[\]{}−])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            chunk = m.group()
            nl = chunk.count("\n")
            if nl:
                line += nl
                line_start = pos + chunk.rfind("\n") + 1
        else:
            tok = m.group().replace("−", "-")
            tokens.append(Token(kind, tok, line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


@dataclass
class _Value:
    value: float
    integer: bool
    tok: Token


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def cur(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.cur
        if t.text != text or t.kind == "eof":
            found = "end of input" if t.kind == "eof" else repr(t.text)
            raise ParseError(f"expected {text!r}, found {found}", t.line, t.col)
        return self.take()

    def circuit(self, closing: str | None) -> Circuit:
        terms: list[Term] = []
        if self.cur.kind == "eof" or (closing and self.cur.text == closing):
            return Circuit(())
        terms.append(self.term(nested=closing is not None))
        while self.cur.text == ";":
            self.take()
            terms.append(self.term(nested=closing is not None))
        t = self.cur
        if closing is None and t.kind != "eof":
            raise ParseError(f"expected ';' or end of input, found {t.text!r}", t.line, t.col)
        return Circuit(tuple(terms))

    def term(self, nested: bool) -> Term:
        t = self.cur
        if t.kind != "name":
            found = "end of input" if t.kind == "eof" else repr(t.text)
            raise ParseError(f"expected a gate name, found {found}", t.line, t.col)
        name_tok = self.take()
        pos = (name_tok.line, name_tok.col)
        if name_tok.text == "C" and self.cur.text == "[":
            if nested:
                raise ParseError("conditioned blocks cannot be nested", *pos, kind="nesting")
            self.take()
            q = self.expr()
            if not q.integer or q.value < 1:
                raise ParseError("control qubit must be a positive integer", q.tok.line, q.tok.col, kind="arity")
            self.expect("]")
            self.expect("{")
            body = self.circuit(closing="}")
            self.expect("}")
            return Conditioned(int(q.value), body, pos)
        self.expect("(")
        groups = [[self.expr()]]
        while self.cur.text in (",", ";"):
            sep = self.take().text
            if sep == ";":
                groups.append([])
            groups[-1].append(self.expr())
        self.expect(")")
        return self.build(name_tok, groups)

    def build(self, name_tok: Token, groups: list[list[_Value]]) -> Term:
        name, pos = name_tok.text, (name_tok.line, name_tok.col)
        if name in PRIMITIVES:
            if len(groups) != 1:
                raise ParseError(f"{name} takes a single argument group", *pos, kind="arity")
            n_modes, n_req, n_opt = PRIMITIVES[name]
            args = groups[0]
            if not n_modes + n_req <= len(args) <= n_modes + n_req + n_opt:
                want = f"{n_modes + n_req}" + (f"..{n_modes + n_req + n_opt}" if n_opt else "")
                raise ParseError(f"{name} takes {want} argument(s), got {len(args)}", *pos, kind="arity")
            modes = []
            for v in args[:n_modes]:
                if not v.integer or v.value < 1:
                    raise ParseError(f"{name}: mode must be a positive integer", v.tok.line, v.tok.col, kind="arity")
                modes.append(int(v.value))
            if len(set(modes)) != len(modes):
                raise ParseError(f"{name}: repeated mode {modes[0]} in a two-mode gate", *pos, kind="repeated_mode")
            params = tuple(float(v.value) for v in args[n_modes:])
            if name == "F" and params and params[0] <= 0:
                raise ParseError("F: scale sigma must be positive", *pos, kind="arity")
            return Primitive(name, tuple(modes), params, pos)
        mdef = MACROS.get(name)
        if mdef is None:
            raise ParseError(f"unknown gate name {name!r}", *pos, kind="unknown_gate")
        args = tuple(tuple(int(v.value) if v.integer else v.value for v in g) for g in groups)
        try:
            bind_args(mdef, args)
        except MacroError as e:
            kind = "repeated_mode" if "distinct" in str(e) else "arity"
            raise ParseError(str(e), *pos, kind=kind) from None
        return MacroRef(name, args, pos)

    # expressions
    def expr(self) -> _Value:
        first = self.cur
        sign = 1.0
        if self.cur.text in "+-" and self.cur.kind == "op":
            sign = -1.0 if self.take().text == "-" else 1.0
        v = self.prod()
        val, integer = sign * v.value, v.integer
        while self.cur.kind == "op" and self.cur.text in "+-":
            op = self.take().text
            w = self.prod()
            val = val + w.value if op == "+" else val - w.value
            integer = integer and w.integer
        return _Value(val, integer, first)

    def prod(self) -> _Value:
        v = self.unary()
        val, integer, tok = v.value, v.integer, v.tok
        while self.cur.kind == "op" and self.cur.text in "*/":
            op = self.take().text
            w = self.unary()
            if op == "*":
                val, integer = val * w.value, integer and w.integer
            else:
                if w.value == 0:
                    raise ParseError("division by zero", w.tok.line, w.tok.col)
                val, integer = val / w.value, False
        return _Value(val, integer, tok)

    def unary(self) -> _Value:
        if self.cur.kind == "op" and self.cur.text == "-":
            tok = self.take()
            v = self.unary()
            return _Value(-v.value, v.integer, tok)
        return self.atom()

    def atom(self) -> _Value:
        t = self.cur
        if t.kind == "num":
            self.take()
            is_int = re.fullmatch(r"\d+", t.text) is not None
            return _Value(float(t.text), is_int, t)
        if t.kind == "name" and t.text == "pi":
            self.take()
            return _Value(math.pi, False, t)
        if t.kind == "name" and t.text == "sqrt":
            self.take()
            self.expect("(")
            v = self.expr()
            self.expect(")")
            if v.value < 0:
                raise ParseError("sqrt of a negative number", t.line, t.col)
            return _Value(math.sqrt(v.value), False, t)
        if t.text == "(" and t.kind == "op":
            self.take()
            v = self.expr()
            self.expect(")")
            return _Value(v.value, v.integer, t)
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"expected a number, 'pi' or '(', found {found}", t.line, t.col)


def parse(text: str) -> Circuit:
    """Parse DSL text into a circuit AST with source positions."""
    return _Parser(text).circuit(closing=None)
