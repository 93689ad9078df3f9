"""Exact scalars and locally constant functions on the Cantor space.

Scalars are Gaussian rationals (pairs of `fractions.Fraction`), so every
computation downstream is exact and equality is structural.  A piecewise
constant function is a finite assignment of nonzero scalars to a prefix-free
antichain of cylinders; the canonical form merges sibling cylinders carrying
equal values, which makes function equality structural as well.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cantor import ClopenSet, Point, check_word, extensions
from .errors import ParseError

_Rat = (int, Fraction)


@dataclass(frozen=True)
class Scalar:
    """A Gaussian rational re + im*i."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        if not isinstance(self.re, _Rat) or not isinstance(self.im, _Rat):
            raise TypeError("scalar parts must be integers or Fractions")
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __add__(self, other: "Scalar") -> "Scalar":
        return Scalar(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "Scalar") -> "Scalar":
        return Scalar(self.re - other.re, self.im - other.im)

    def __mul__(self, other: "Scalar") -> "Scalar":
        return Scalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __neg__(self) -> "Scalar":
        return Scalar(-self.re, -self.im)

    def conj(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def abs_sq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __str__(self) -> str:
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"

    @staticmethod
    def parse(text: str) -> "Scalar":
        s = text.strip().replace(" ", "")
        if not s:
            raise ParseError("empty scalar")
        if not s.endswith("i"):
            try:
                return Scalar(Fraction(s), Fraction(0))
            except ValueError as exc:
                raise ParseError(f"bad scalar {text!r}") from exc
        body = s[:-1]
        split = None
        for i in range(1, len(body)):
            if body[i] in "+-" and body[i - 1].isdigit():
                split = i
        try:
            if split is None:
                if body in ("", "+", "-"):
                    body += "1"
                return Scalar(Fraction(0), Fraction(body))
            return Scalar(Fraction(body[:split]), Fraction(body[split:]))
        except ValueError as exc:
            raise ParseError(f"bad scalar {text!r}") from exc


ZERO = Scalar()
ONE = Scalar(Fraction(1))


def _merge_equal_siblings(table: dict[str, Scalar]) -> dict[str, Scalar]:
    merged = True
    while merged:
        merged = False
        for w in sorted(table, key=len, reverse=True):
            if not w or w not in table:
                continue
            sib = w[:-1] + ("1" if w[-1] == "0" else "0")
            if sib in table and table[sib] == table[w]:
                value = table.pop(w)
                table.pop(sib)
                table[w[:-1]] = value
                merged = True
    return table


@dataclass(frozen=True)
class PiecewiseConstant:
    """A locally constant function with finitely many nonzero cylinder values."""

    pieces: tuple[tuple[str, Scalar], ...] = ()

    def __post_init__(self):
        table: dict[str, Scalar] = {}
        for w, c in self.pieces:
            check_word(w)
            if w in table:
                raise ValueError(f"duplicate piece {w!r}")
            if not isinstance(c, Scalar):
                raise TypeError("piece values must be Scalars")
            if not c.is_zero():
                table[w] = c
        words = sorted(table, key=len)
        for i, w in enumerate(words):
            for p in words[:i]:
                if w.startswith(p):
                    raise ValueError(f"pieces overlap: {p!r} and {w!r}")
        table = _merge_equal_siblings(table)
        object.__setattr__(self, "pieces", tuple(sorted(table.items())))

    def is_zero(self) -> bool:
        return not self.pieces

    def support(self) -> ClopenSet:
        return ClopenSet(tuple(w for w, _ in self.pieces))

    def value_at(self, x: Point) -> Scalar:
        for w, c in self.pieces:
            if x.starts_with(w):
                return c
        return ZERO

    def __add__(self, other: "PiecewiseConstant") -> "PiecewiseConstant":
        depth = max(
            (len(w) for w, _ in self.pieces + other.pieces), default=0
        )
        acc: dict[str, Scalar] = {}
        for fam in (self.pieces, other.pieces):
            for w, c in fam:
                for cell in extensions(w, depth):
                    acc[cell] = acc.get(cell, ZERO) + c
        return PiecewiseConstant(tuple(acc.items()))

    def __neg__(self) -> "PiecewiseConstant":
        return PiecewiseConstant(tuple((w, -c) for w, c in self.pieces))

    def __sub__(self, other: "PiecewiseConstant") -> "PiecewiseConstant":
        return self + (-other)

    def __mul__(self, other: "PiecewiseConstant") -> "PiecewiseConstant":
        out = {}
        for u, a in self.pieces:
            for v, b in other.pieces:
                if u.startswith(v) or v.startswith(u):
                    out[u if len(u) >= len(v) else v] = a * b
        return PiecewiseConstant(tuple(out.items()))

    def scale(self, c: Scalar) -> "PiecewiseConstant":
        return PiecewiseConstant(tuple((w, c * v) for w, v in self.pieces))

    def conj(self) -> "PiecewiseConstant":
        return PiecewiseConstant(tuple((w, c.conj()) for w, c in self.pieces))

    def restrict(self, s: ClopenSet) -> "PiecewiseConstant":
        return self * indicator(s)

    def sup_norm_sq(self) -> Fraction:
        return max((c.abs_sq() for _, c in self.pieces), default=Fraction(0))

    def __str__(self) -> str:
        if not self.pieces:
            return "0"
        return " + ".join(
            f"({c})*1_[{'ε' if w == '' else w}]" for w, c in self.pieces
        )


ZERO_FUNC = PiecewiseConstant(())


def indicator(s: ClopenSet, value: Scalar = ONE) -> PiecewiseConstant:
    return PiecewiseConstant(tuple((w, value) for w in s.words))


def compose_with_map(f: PiecewiseConstant, m) -> PiecewiseConstant:
    """The pullback x -> f(m(x)) along a prefix map, computed exactly.

    Supported inside the preimage of f's support; pieces outside the image of m
    contribute nothing.
    """
    out = {}
    for w, c in f.pieces:
        for u, v in m.rules:
            if w.startswith(v):
                out[u + w[len(v):]] = c
            elif v.startswith(w) and v != w:
                out[u] = c
    return PiecewiseConstant(tuple(out.items()))
