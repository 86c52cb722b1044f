"""Parser and evaluator for Leavitt path algebra expressions.

Grammar::

    expr   := ['-'] term (('+' | '-') term)*
    term   := scalar factor* | factor+  (juxtaposition is the product)
    factor := atom '*'*                (postfix star = ghost / adjoint)
    atom   := IDENT | '{' any id '}' | '(' expr ')'
    scalar := INT ('/' INT)?

A scalar on its own stands for that multiple of the unit (the sum of all
vertices), so ``0`` and ``2`` parse. Identifiers name edges first, then vertices. Braces quote ids that contain
operator characters or start with a digit, e.g. ``{1}`` or ``{e__a/b}``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .leavitt import QQ, Element, Field, edge, star, vertex
from .quiver import Quiver, QuiverError

__all__ = [
    "ParseError",
    "Sym",
    "Num",
    "Add",
    "Sub",
    "Mul",
    "Neg",
    "Star",
    "LpaExpr",
    "star_expr",
    "parse",
    "evaluate",
    "eval_text",
]


class ParseError(QuiverError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Add:
    left: LpaExpr
    right: LpaExpr


@dataclass(frozen=True)
class Sub:
    left: LpaExpr
    right: LpaExpr


@dataclass(frozen=True)
class Mul:
    left: LpaExpr
    right: LpaExpr


@dataclass(frozen=True)
class Neg:
    arg: LpaExpr


@dataclass(frozen=True)
class Star:
    arg: LpaExpr


LpaExpr = Sym | Num | Add | Sub | Mul | Neg | Star


def star_expr(e: LpaExpr) -> LpaExpr:
    """Star with the involution applied: (x*)* is x."""
    return e.arg if isinstance(e, Star) else Star(e)


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<int>\d+)
  | (?P<quoted>\{[^{}]*\})
  | (?P<op>[-+*/()])
  | (?P<ident>[^\s(){}+\-*/0-9][^\s(){}+\-*/]*)
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind == "quoted":
            tokens.append(("ident", m.group()[1:-1], pos))
        elif kind == "op":
            tokens.append((m.group(), m.group(), pos))
        elif kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def kind(self) -> str:
        return self.tokens[self.i][0]

    def take(self, kind: str) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def expr(self) -> LpaExpr:
        if self.kind == "-":
            self.take("-")
            node: LpaExpr = Neg(self.term())
        else:
            node = self.term()
        while self.kind in ("+", "-"):
            op = self.take(self.kind)[0]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> LpaExpr:
        node: LpaExpr | None = None
        if self.kind == "int":
            num = Fraction(int(self.take("int")[1]))
            if self.kind == "/":
                tok = self.take("/")
                den = int(self.take("int")[1])
                if den == 0:
                    raise ParseError("zero denominator", tok[2])
                num /= den
            node = Num(num)
        factors = 0
        while self.kind in ("ident", "("):
            f = self.factor()
            node = f if node is None else Mul(node, f)
            factors += 1
        if factors == 0 and node is None:
            tok = self.tokens[self.i]
            raise ParseError(f"expected a factor, found {tok[1] or 'end of input'!r}", tok[2])
        return node

    def factor(self) -> LpaExpr:
        if self.kind == "(":
            self.take("(")
            node = self.expr()
            self.take(")")
        else:
            node = Sym(self.take("ident")[1])
        while self.kind == "*":
            self.take("*")
            node = star_expr(node)
        return node


def parse(text: str, q: Quiver | None = None) -> LpaExpr:
    """Parse ``text``; when ``q`` is given every identifier must name one of its
    edges or vertices."""
    p = _Parser(text)
    tree = p.expr()
    p.take("eof")
    if q is not None:
        for name, pos in _symbols(tree, p.tokens):
            if name not in q.edge_map and name not in q:
                raise ParseError(f"unknown identifier {name!r}", pos)
    return tree


def _symbols(tree: LpaExpr, tokens) -> list[tuple[str, int]]:
    positions = {}
    for kind, val, pos in tokens:
        if kind == "ident":
            positions.setdefault(val, pos)
    names: list[str] = []

    def walk(t: LpaExpr) -> None:
        if isinstance(t, Sym):
            names.append(t.name)
        elif isinstance(t, (Add, Sub, Mul)):
            walk(t.left)
            walk(t.right)
        elif isinstance(t, (Neg, Star)):
            walk(t.arg)

    walk(tree)
    return [(n, positions.get(n, 0)) for n in names]


def evaluate(e: LpaExpr, q: Quiver, field: Field = QQ) -> Element:
    """Evaluate a parse tree to a CK-1 reduced element of L_k(q)."""
    if isinstance(e, Sym):
        if e.name in q.edge_map:
            return edge(q, e.name, field)
        if e.name in q:
            return vertex(q, e.name, field)
        raise QuiverError(f"unknown identifier {e.name!r}")
    if isinstance(e, Num):
        # a bare scalar stands for scalar * 1 = sum of all vertices
        one = Element.zero(q, field)
        for v in q.vertices:
            one = one + vertex(q, v, field)
        return one.scale(e.value)
    if isinstance(e, Add):
        return evaluate(e.left, q, field) + evaluate(e.right, q, field)
    if isinstance(e, Sub):
        return evaluate(e.left, q, field) - evaluate(e.right, q, field)
    if isinstance(e, Neg):
        return -evaluate(e.arg, q, field)
    if isinstance(e, Star):
        return star(evaluate(e.arg, q, field))
    if isinstance(e, Mul):
        if isinstance(e.left, Num):
            return evaluate(e.right, q, field).scale(e.left.value)
        return evaluate(e.left, q, field) * evaluate(e.right, q, field)
    raise TypeError(f"not an expression node: {e!r}")


def eval_text(text: str, q: Quiver, field: Field = QQ) -> Element:
    return evaluate(parse(text, q), q, field)
