"""Exact arithmetic in Leavitt path algebras L_k(Q) of finite quivers.

Elements are finite linear combinations of monomials p q* (p, q paths with
r(p) = r(q)). Products are resolved with the CK-1 relation, so every stored
monomial is already CK-1 reduced. :func:`normal_form` additionally rewrites
with CK-2 at each regular vertex, using the lexicographically last edge of
s^{-1}(v) as the eliminated edge; the irreducible monomials form a basis.
"""

from __future__ import annotations

import random
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Union

from .quiver import Path, Quiver, QuiverError

__all__ = [
    "Field",
    "QQ",
    "GF",
    "Monomial",
    "Element",
    "Grading",
    "multiply",
    "star",
    "normal_form",
    "degree",
    "standard_grading",
    "vertex",
    "edge",
    "ghost",
    "path_element",
    "corner_idempotent",
    "distinguished_edges",
]

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class Field:
    """Q when ``prime`` is None, otherwise the prime field GF(prime)."""

    prime: int | None = None

    def __post_init__(self) -> None:
        p = self.prime
        if p is not None and (p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1))):
            raise ValueError(f"{p} is not prime")

    def __call__(self, x: int | Fraction | str) -> Scalar:
        if isinstance(x, str):
            x = Fraction(x)
        if self.prime is None:
            x = Fraction(x)
            return int(x) if x.denominator == 1 else x
        x = Fraction(x)
        if x.denominator % self.prime == 0:
            raise ZeroDivisionError(f"{x} has no image in GF({self.prime})")
        return x.numerator * pow(x.denominator, -1, self.prime) % self.prime

    def __str__(self) -> str:
        return "Q" if self.prime is None else f"GF({self.prime})"

    @classmethod
    def parse(cls, text: str) -> Field:
        """``"q"`` for the rationals or ``"fp:<prime>"``."""
        if text.lower() in ("q", "qq"):
            return cls()
        if text.lower().startswith("fp:"):
            return cls(int(text[3:]))
        raise ValueError(f"unknown field {text!r}; use 'q' or 'fp:<prime>'")


QQ = Field()


def GF(p: int) -> Field:
    return Field(p)


class Monomial(NamedTuple):
    """p q*; ``q`` is stored un-starred. The vertex idempotent v is (v, v)."""

    p: Path
    q: Path

    @classmethod
    def make(cls, p: Path, q: Path) -> Monomial:
        if p.range != q.range:
            raise QuiverError(f"monomial needs r(p) == r(q), got {p.range!r} and {q.range!r}")
        return cls(p, q)

    @property
    def source(self) -> str:
        return self.p.source

    @property
    def range(self) -> str:
        # range of p q* is r(q*) = s(q)
        return self.q.source

    def star(self) -> Monomial:
        return Monomial(self.q, self.p)

    def render(self) -> str:
        if self.p.is_trivial and self.q.is_trivial:
            return self.p.source
        parts = list(self.p.edges) + [f"{e}*" for e in reversed(self.q.edges)]
        return " ".join(parts)


def _monomial_product(x: Monomial, y: Monomial) -> Monomial | None:
    """(p q*)(u v*) via CK-1: nonzero only when one of q, u extends the other."""
    p, q = x
    u, v = y
    if q.source != u.source:
        return None
    lq, lu = len(q.edges), len(u.edges)
    if lq <= lu:
        if u.edges[:lq] != q.edges:
            return None
        rest = u.edges[lq:]
        return Monomial(Path(p.source, p.edges + rest, u.range), v)
    if q.edges[:lu] != u.edges:
        return None
    rest = q.edges[lu:]
    return Monomial(p, Path(v.source, v.edges + rest, q.range))


class Element:
    """An immutable element of L_k(Q): a map Monomial -> nonzero scalar."""

    __slots__ = ("quiver", "field", "terms")

    def __init__(self, quiver: Quiver, terms: Mapping[Monomial, Scalar] | None = None, field: Field = QQ):
        self.quiver = quiver
        self.field = field
        clean: dict[Monomial, Scalar] = {}
        for m, c in (terms or {}).items():
            c = field(c)
            if c:
                clean[m] = c
        self.terms = clean

    @classmethod
    def _raw(cls, quiver: Quiver, field: Field, terms: dict[Monomial, Scalar]) -> Element:
        # terms are already normalized scalars with zeros removed
        obj = object.__new__(cls)
        obj.quiver, obj.field, obj.terms = quiver, field, terms
        return obj

    @classmethod
    def zero(cls, quiver: Quiver, field: Field = QQ) -> Element:
        return cls._raw(quiver, field, {})

    @classmethod
    def monomial(cls, quiver: Quiver, m: Monomial, coeff: Scalar = 1, field: Field = QQ) -> Element:
        return cls(quiver, {Monomial.make(*m): coeff}, field)

    # -- structure --------------------------------------------------------

    def _compatible(self, other: Element) -> None:
        if self.quiver is not other.quiver and self.quiver != other.quiver:
            raise QuiverError("elements live over different quivers")
        if self.field != other.field:
            raise QuiverError(f"field mismatch: {self.field} vs {other.field}")

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[tuple[Monomial, Scalar]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, Element):
            return NotImplemented
        return self.field == other.field and self.quiver == other.quiver and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    # -- arithmetic -------------------------------------------------------

    def _combine(self, other: Element, sign: int) -> Element:
        self._compatible(other)
        out = dict(self.terms)
        f = self.field
        for m, c in other.terms.items():
            v = f(out.get(m, 0) + sign * c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Element._raw(self.quiver, f, out)

    def __add__(self, other: Element) -> Element:
        return self._combine(other, 1)

    def __sub__(self, other: Element) -> Element:
        return self._combine(other, -1)

    def __neg__(self) -> Element:
        f = self.field
        return Element._raw(self.quiver, f, {m: f(-c) for m, c in self.terms.items()})

    def scale(self, c: Scalar | str) -> Element:
        f = self.field
        c = f(c)
        if not c:
            return Element.zero(self.quiver, f)
        return Element._raw(self.quiver, f, {m: f(c * x) for m, x in self.terms.items()})

    def __mul__(self, other: Element | int | Fraction) -> Element:
        if isinstance(other, Element):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other: int | Fraction) -> Element:
        return self.scale(other)

    def star(self) -> Element:
        return star(self)

    def nf(self) -> Element:
        return normal_form(self)

    # -- display and serialization ---------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for m, c in sorted(self.terms.items(), key=lambda t: _sort_key(t[0])):
            body = m.render()
            neg = self.field.prime is None and c < 0
            mag = -c if neg else c
            coeff = "" if mag == 1 else f"{mag} "
            sign = "-" if neg else "+"
            out.append((sign, coeff + body))
        text = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, t in out[1:]:
            text += f" {sign} {t}"
        return text

    def __repr__(self) -> str:
        return f"Element({self})"

    def to_json_obj(self) -> list[dict]:
        def enc(path: Path):
            return list(path.edges) if path.edges else {"vertex": path.source}

        return [
            {"p": enc(m.p), "q": enc(m.q), "coeff": str(c)}
            for m, c in sorted(self.terms.items(), key=lambda t: _sort_key(t[0]))
        ]

    @classmethod
    def from_json_obj(cls, quiver: Quiver, obj: Iterable[Mapping], field: Field = QQ) -> Element:
        def dec(x) -> Path:
            if isinstance(x, Mapping):
                return Path.trivial(quiver.check_vertex(x["vertex"]))
            return quiver.path(*x)

        out = Element.zero(quiver, field)
        for t in obj:
            out = out + Element.monomial(quiver, Monomial.make(dec(t["p"]), dec(t["q"])), field(t["coeff"]), field)
        return out


def _sort_key(m: Monomial):
    return (m.p.length + m.q.length, m.p.edges, m.q.edges, m.p.source, m.q.source)


# -- constructors ---------------------------------------------------------


def vertex(q: Quiver, v: str, field: Field = QQ) -> Element:
    t = Path.trivial(q.check_vertex(v))
    return Element._raw(q, field, {Monomial(t, t): field(1)})


def edge(q: Quiver, e: str, field: Field = QQ) -> Element:
    ed = q.edge(e)
    return Element._raw(q, field, {Monomial(Path(ed.src, (e,), ed.dst), Path.trivial(ed.dst)): field(1)})


def ghost(q: Quiver, e: str, field: Field = QQ) -> Element:
    return star(edge(q, e, field))


def path_element(q: Quiver, p: Path, field: Field = QQ) -> Element:
    return Element._raw(q, field, {Monomial(p, Path.trivial(p.range)): field(1)})


def corner_idempotent(q: Quiver, keep: Iterable[str], field: Field = QQ) -> Element:
    """e = sum of the vertex idempotents of ``keep``."""
    keep = sorted(q.check_vertices(keep))
    if not keep:
        raise QuiverError("corner idempotent needs a nonempty vertex set")
    terms = {}
    for v in keep:
        t = Path.trivial(v)
        terms[Monomial(t, t)] = field(1)
    return Element._raw(q, field, terms)


# -- core operations ------------------------------------------------------


def multiply(a: Element, b: Element) -> Element:
    a._compatible(b)
    f = a.field
    out: dict[Monomial, Scalar] = {}
    for x, cx in a.terms.items():
        for y, cy in b.terms.items():
            m = _monomial_product(x, y)
            if m is None:
                continue
            v = f(out.get(m, 0) + cx * cy)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return Element._raw(a.quiver, f, out)


def star(a: Element) -> Element:
    return Element._raw(a.quiver, a.field, {m.star(): c for m, c in a.terms.items()})


def distinguished_edges(q: Quiver) -> dict[str, str]:
    """The edge removed by CK-2 rewriting at each regular vertex."""
    return {v: ids[-1] for v, ids in q.out_edges.items() if ids}


def _reduce_once(q: Quiver, special: Mapping[str, str], m: Monomial) -> list[tuple[Monomial, int]] | None:
    """One CK-2 step on a monomial ending in (ê, ê*), or None if irreducible."""
    p, r = m
    if not p.edges or not r.edges or p.edges[-1] != r.edges[-1]:
        return None
    last = p.edges[-1]
    v = q.edge_map[last].src
    if special.get(v) != last:
        return None
    p0 = Path(p.source, p.edges[:-1], v)
    r0 = Path(r.source, r.edges[:-1], v)
    out = [(Monomial(p0, r0), 1)]
    for e in q.out_edges[v]:
        if e != last:
            w = q.edge_map[e].dst
            out.append((Monomial(Path(p.source, p0.edges + (e,), w), Path(r.source, r0.edges + (e,), w)), -1))
    return out


def normal_form(a: Element, rng: random.Random | None = None) -> Element:
    """CK-2 normal form; two elements are equal in L_k(Q) iff their normal forms
    coincide. ``rng`` randomizes which reducible monomial is rewritten next."""
    q, f = a.quiver, a.field
    special = distinguished_edges(q)
    pending: dict[Monomial, Scalar] = dict(a.terms)
    done: dict[Monomial, Scalar] = {}
    while pending:
        if rng is None:
            m = next(iter(pending))
        else:
            m = rng.choice(list(pending))
        c = pending.pop(m)
        step = _reduce_once(q, special, m)
        if step is None:
            v = f(done.get(m, 0) + c)
            if v:
                done[m] = v
            else:
                done.pop(m, None)
            continue
        for m2, sign in step:
            target = done if m2 in done else pending
            v = f(target.get(m2, 0) + sign * c)
            if v:
                target[m2] = v
            else:
                target.pop(m2, None)
    return Element._raw(q, f, done)


def is_reduced(a: Element) -> bool:
    special = distinguished_edges(a.quiver)
    return all(_reduce_once(a.quiver, special, m) is None for m in a.terms)


# -- gradings -------------------------------------------------------------


@dataclass(frozen=True)
class Grading:
    """Edge weights in (1/denominator)Z, stored as integer numerators.
    Ghost edges get the negated weight and vertices weight 0."""

    denominator: int
    weights: Mapping[str, int]

    def __post_init__(self) -> None:
        if self.denominator < 1:
            raise ValueError("grading denominator must be >= 1")

    def weight(self, e: str) -> Fraction:
        return Fraction(self.weights[e], self.denominator)

    def path_degree(self, p: Path) -> Fraction:
        return Fraction(sum(self.weights[e] for e in p.edges), self.denominator)

    def monomial_degree(self, m: Monomial) -> Fraction:
        return Fraction(
            sum(self.weights[e] for e in m.p.edges) - sum(self.weights[e] for e in m.q.edges),
            self.denominator,
        )

    def to_json_obj(self) -> dict:
        return {"denominator": self.denominator, "weights": dict(sorted(self.weights.items()))}

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> Grading:
        return cls(int(obj["denominator"]), {k: int(v) for k, v in obj["weights"].items()})


def standard_grading(q: Quiver) -> Grading:
    return Grading(1, {e.id: 1 for e in q.edges})


def degree(a: Element, g: Grading | None = None) -> Fraction | None:
    """Common degree of the monomials of ``normal_form(a)``; None when ``a`` is
    not homogeneous. Zero is homogeneous of every degree; we report 0."""
    g = standard_grading(a.quiver) if g is None else g
    degs = {g.monomial_degree(m) for m in normal_form(a).terms}
    if not degs:
        return Fraction(0)
    if len(degs) > 1:
        return None
    return degs.pop()
