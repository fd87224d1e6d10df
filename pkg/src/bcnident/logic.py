"""Boolean equation frontend: parse network source text and compile it to
structure matrices.

Source format, one statement per line, ``#`` starts a comment::

    states 3 inputs 3 outputs 3
    x1' = !u1 & (x2 | x3)
    y1  = x1 | !x2 | x3

The declaration line is optional; without it the dimensions are read off
the equations. Operators, tightest first: ``!`` (``¬``), ``&`` (``∧``),
``^``, ``|`` (``∨``), ``->`` (right-associative), ``<->``.

Encoding: TRUE is ``delta_2^1`` and FALSE is ``delta_2^2``, and the
truth-table column order is that of the STP stack ``u_1 ⋉ ... ⋉ u_m ⋉ x_1 ⋉
... ⋉ x_n``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from .stp import LogicalMatrix, khatri_rao


class NetworkSyntaxError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Var:
    kind: str  # "x" or "u"
    index: int

    @property
    def name(self) -> str:
        return f"{self.kind}{self.index}"


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Not:
    arg: "BoolExpr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of AND OR XOR IMPLIES IFF
    left: "BoolExpr"
    right: "BoolExpr"


BoolExpr = Var | Const | Not | BinOp


_OPS = {
    "AND": lambda a, b: a and b,
    "OR": lambda a, b: a or b,
    "XOR": lambda a, b: a != b,
    "IMPLIES": lambda a, b: (not a) or b,
    "IFF": lambda a, b: a == b,
}


def evaluate(e: BoolExpr, env: Mapping[str, bool]) -> bool:
    if isinstance(e, Var):
        return env[e.name]
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Not):
        return not evaluate(e.arg, env)
    return _OPS[e.op](evaluate(e.left, env), evaluate(e.right, env))


def variables(e: BoolExpr) -> set[Var]:
    if isinstance(e, Var):
        return {e}
    if isinstance(e, Const):
        return set()
    if isinstance(e, Not):
        return variables(e.arg)
    return variables(e.left) | variables(e.right)


# ---------------------------------------------------------------------------
# Lexer / parser

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<iff><->|↔)
  | (?P<implies>->|→)
  | (?P<var>[xuy][0-9]+)
  | (?P<const>[01])
  | (?P<not>!|¬)
  | (?P<and>&|∧)
  | (?P<or>\||∨)
  | (?P<xor>\^|⊕)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<prime>')
  | (?P<eq>=)
  | (?P<word>[A-Za-z]+|[0-9]+)
    """,
    re.VERBOSE,
)


@dataclass
class _Token:
    kind: str
    text: str
    col: int  # 1-based


def _tokenize(text: str, line: int) -> list[_Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise NetworkSyntaxError(f"unexpected character {text[pos]!r}", line, pos + 1)
        if m.lastgroup != "ws":
            out.append(_Token(m.lastgroup, m.group(), pos + 1))
        pos = m.end()
    out.append(_Token("end", "", len(text) + 1))
    return out


class _ExprParser:
    def __init__(self, tokens: list[_Token], line: int):
        self.toks = tokens
        self.i = 0
        self.line = line

    def peek(self) -> _Token:
        return self.toks[self.i]

    def take(self, kind: str | None = None) -> _Token:
        tok = self.toks[self.i]
        if kind is not None and tok.kind != kind:
            self.fail(f"expected {kind}, found {tok.text or 'end of line'!r}", tok)
        self.i += 1
        return tok

    def fail(self, msg: str, tok: _Token | None = None):
        tok = tok or self.peek()
        raise NetworkSyntaxError(msg, self.line, tok.col)

    def parse(self) -> BoolExpr:
        e = self.iff()
        if self.peek().kind != "end":
            self.fail(f"unexpected {self.peek().text!r}")
        return e

    def _left_assoc(self, sub, kind: str, op: str) -> BoolExpr:
        e = sub()
        while self.peek().kind == kind:
            self.take()
            e = BinOp(op, e, sub())
        return e

    def iff(self):
        return self._left_assoc(self.implies, "iff", "IFF")

    def implies(self):
        e = self.or_()
        if self.peek().kind == "implies":
            self.take()
            return BinOp("IMPLIES", e, self.implies())
        return e

    def or_(self):
        return self._left_assoc(self.xor, "or", "OR")

    def xor(self):
        return self._left_assoc(self.and_, "xor", "XOR")

    def and_(self):
        return self._left_assoc(self.unary, "and", "AND")

    def unary(self):
        if self.peek().kind == "not":
            self.take()
            return Not(self.unary())
        return self.atom()

    def atom(self):
        tok = self.peek()
        if tok.kind == "var":
            self.take()
            if tok.text[0] == "y":
                self.fail("outputs cannot appear inside expressions", tok)
            idx = int(tok.text[1:])
            if idx < 1:
                self.fail(f"variable index must be positive: {tok.text}", tok)
            return Var(tok.text[0], idx)
        if tok.kind == "const":
            self.take()
            return Const(tok.text == "1")
        if tok.kind == "lpar":
            self.take()
            e = self.iff()
            self.take("rpar")
            return e
        self.fail(f"expected an operand, found {tok.text or 'end of line'!r}", tok)


def parse_expr(text: str, line: int = 1) -> BoolExpr:
    """Parse a single Boolean expression."""
    return _ExprParser(_tokenize(text, line), line).parse()


# ---------------------------------------------------------------------------
# Whole networks


@dataclass(frozen=True)
class NetworkSpec:
    n: int
    m: int
    l: int
    update_exprs: tuple[BoolExpr, ...]
    output_exprs: tuple[BoolExpr, ...] = field(default=())

    def __post_init__(self):
        if len(self.update_exprs) != self.n or len(self.output_exprs) != self.l:
            raise ValueError("equation count does not match declared dimensions")
        for e in self.update_exprs:
            for v in variables(e):
                if v.index > (self.n if v.kind == "x" else self.m):
                    raise ValueError(f"undeclared variable {v.name}")
        for e in self.output_exprs:
            for v in variables(e):
                if v.kind == "u":
                    raise ValueError(f"output equation references input {v.name}")
                if v.index > self.n:
                    raise ValueError(f"undeclared variable {v.name}")

    @property
    def state_order(self) -> list[Var]:
        return [Var("x", i) for i in range(1, self.n + 1)]

    @property
    def update_order(self) -> list[Var]:
        return [Var("u", j) for j in range(1, self.m + 1)] + self.state_order


_DECL_RE = re.compile(r"states\s+(\d+)\s+inputs\s+(\d+)\s+outputs\s+(\d+)")


def _iter_lines(text: str) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if body.strip():
            yield lineno, body


def parse_network(text: str) -> NetworkSpec:
    dims: tuple[int, int, int] | None = None
    updates: dict[int, BoolExpr] = {}
    outputs: dict[int, BoolExpr] = {}
    where: dict[tuple[str, int], tuple[int, int]] = {}

    for lineno, body in _iter_lines(text):
        if body.split()[0] == "states":
            m = _DECL_RE.fullmatch(body.strip())
            if m is None:
                raise NetworkSyntaxError("malformed declaration, expected 'states N inputs M outputs L'", lineno, 1)
            if dims is not None:
                raise NetworkSyntaxError("duplicate declaration", lineno, 1)
            dims = (int(m[1]), int(m[2]), int(m[3]))
            continue

        toks = _tokenize(body, lineno)
        head = toks[0]
        if head.kind != "var" or head.text[0] not in "xy":
            raise NetworkSyntaxError(f"expected an equation for x<i>' or y<j>, found {head.text!r}", lineno, head.col)
        kind, idx = head.text[0], int(head.text[1:])
        pos = 1
        if kind == "x":
            if toks[pos].kind != "prime":
                raise NetworkSyntaxError("state equations are written x<i>' = ...", lineno, toks[pos].col)
            pos += 1
        elif toks[pos].kind == "prime":
            raise NetworkSyntaxError("output equations take no prime", lineno, toks[pos].col)
        if toks[pos].kind != "eq":
            raise NetworkSyntaxError("expected '='", lineno, toks[pos].col)
        expr = _ExprParser(toks[pos + 1:], lineno).parse()
        target = updates if kind == "x" else outputs
        if idx in target:
            first = where[(kind, idx)][0]
            raise NetworkSyntaxError(f"duplicate equation for {head.text} (first at line {first})", lineno, head.col)
        target[idx] = expr
        where[(kind, idx)] = (lineno, head.col)

    if dims is None:
        refs = [v for e in [*updates.values(), *outputs.values()] for v in variables(e)]
        n = max([*updates, *(v.index for v in refs if v.kind == "x"), 0])
        m = max([*(v.index for v in refs if v.kind == "u"), 0])
        dims = (n, m, max([*outputs, 0]))
    n, m, l = dims
    if n < 1:
        raise NetworkSyntaxError("a network needs at least one state variable")

    for kind, table, count in (("x", updates, n), ("y", outputs, l)):
        extra = sorted(set(table) - set(range(1, count + 1)))
        if extra:
            line, col = where[(kind, extra[0])]
            raise NetworkSyntaxError(f"equation for undeclared {kind}{extra[0]}", line, col)
        missing = sorted(set(range(1, count + 1)) - set(table))
        if missing:
            raise NetworkSyntaxError(f"missing equation for {kind}{missing[0]}")

    for kind, table in (("x", updates), ("y", outputs)):
        for idx, e in table.items():
            line, col = where[(kind, idx)]
            for v in sorted(variables(e), key=lambda v: (v.kind, v.index)):
                if v.kind == "u" and kind == "y":
                    raise NetworkSyntaxError(f"output y{idx} references input {v.name}", line, col)
                if v.index > (n if v.kind == "x" else m):
                    raise NetworkSyntaxError(f"undeclared variable {v.name}", line, col)

    return NetworkSpec(
        n, m, l,
        tuple(updates[i] for i in range(1, n + 1)),
        tuple(outputs[j] for j in range(1, l + 1)),
    )


def structure_matrix(e: BoolExpr, var_order: Sequence[Var]) -> LogicalMatrix:
    """Structure matrix ``M_f`` with ``f(v_1..v_k) = M_f ⋉ v_1 ⋉ ... ⋉ v_k``."""
    names = [v.name for v in var_order]
    unknown = {v.name for v in variables(e)} - set(names)
    if unknown:
        raise ValueError(f"variables {sorted(unknown)} not in the argument list")
    cols = []
    # product over (True, False) enumerates columns in STP order (TRUE = index 1)
    for values in itertools.product((True, False), repeat=len(names)):
        cols.append(1 if evaluate(e, dict(zip(names, values))) else 2)
    return LogicalMatrix(2, cols)


def assemble(spec: NetworkSpec):
    """Build the algebraic form ``(F, H)`` of a parsed network."""
    from .network import Bcn

    fs = [structure_matrix(e, spec.update_order) for e in spec.update_exprs]
    F = fs[0] if len(fs) == 1 else khatri_rao(*fs)
    ncols = 2**spec.n
    if spec.l == 0:
        H = LogicalMatrix(1, (1,) * ncols)
    else:
        hs = [structure_matrix(e, spec.state_order) for e in spec.output_exprs]
        H = hs[0] if len(hs) == 1 else khatri_rao(*hs)
    return Bcn(spec.n, spec.m, spec.l, F, H)


def compile_network(text: str):
    """``assemble(parse_network(text))``."""
    return assemble(parse_network(text))
