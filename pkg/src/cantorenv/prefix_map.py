"""Partial homeomorphisms of the Cantor space as prefix rewrite systems.

A rule u -> v sends u.w to v.w for every infinite tail w.  A finite rule set
with prefix-free sources and prefix-free targets is an injective open map whose
domain and image are clopen, and the class is closed under composition,
inversion and integer powers.  Generated maps enumerate a countable family of
pairwise disjoint rules (the add-one-with-carry odometer is built in) and
expose clopen truncations consisting of the first rules of the enumeration.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .cantor import ClopenSet, Point, check_word
from .errors import NotInDomain, ParseError


@dataclass(frozen=True)
class PrefixMap:
    """A finite prefix rewrite system, rules kept sorted by source.

    Construction does not reject overlapping rules; `violations` reports them,
    and every other operation assumes a valid map.
    """

    rules: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        cleaned = tuple(
            (check_word(u), check_word(v)) for u, v in self.rules
        )
        object.__setattr__(self, "rules", tuple(sorted(cleaned)))

    def violations(self) -> tuple[str, ...]:
        msgs = []
        rs = self.rules
        for i in range(len(rs)):
            for j in range(i + 1, len(rs)):
                u1, v1 = rs[i]
                u2, v2 = rs[j]
                if u1 == u2:
                    msgs.append(f"sources not prefix-free: duplicate {u1!r}")
                elif u1.startswith(u2) or u2.startswith(u1):
                    msgs.append(f"sources not prefix-free: {u1!r} vs {u2!r}")
                if v1 == v2:
                    msgs.append(f"targets not prefix-free: duplicate {v1!r}")
                elif v1.startswith(v2) or v2.startswith(v1):
                    msgs.append(f"targets not prefix-free: {v1!r} vs {v2!r}")
        return tuple(msgs)

    def is_valid(self) -> bool:
        return not self.violations()

    def domain(self) -> ClopenSet:
        return ClopenSet(tuple(u for u, _ in self.rules))

    def image(self) -> ClopenSet:
        return ClopenSet(tuple(v for _, v in self.rules))

    def maps_point(self, x: Point) -> bool:
        return any(x.starts_with(u) for u, _ in self.rules)

    def apply_point(self, x: Point) -> Point:
        for u, v in self.rules:
            if x.starts_with(u):
                return x.shift(len(u)).with_prefix(v)
        raise NotInDomain(f"{x} is outside {self}")

    def image_set(self, s: ClopenSet) -> ClopenSet:
        found = []
        for u, v in self.rules:
            for w in s.words:
                if w.startswith(u):
                    found.append(v + w[len(u):])
                elif u.startswith(w):
                    found.append(v)
        return ClopenSet(tuple(found))

    def preimage_set(self, s: ClopenSet) -> ClopenSet:
        return self.inverse().image_set(s)

    def inverse(self) -> "PrefixMap":
        return PrefixMap(tuple((v, u) for u, v in self.rules))

    def __str__(self) -> str:
        def show(w):
            return "ε" if w == "" else w

        return "[" + ", ".join(f"{show(u)}->{show(v)}" for u, v in self.rules) + "]"

    @staticmethod
    def parse(text: str) -> "PrefixMap":
        text = text.strip()
        if not (text.startswith("[") and text.endswith("]")):
            raise ParseError(f"map syntax is '[u->v, ...]': {text!r}")
        body = text[1:-1].strip()
        if not body:
            return PrefixMap(())
        rules = []
        for part in body.split(","):
            if "->" not in part:
                raise ParseError(f"rule syntax is 'u->v': {part!r}")
            u, v = part.split("->", 1)
            u, v = u.strip(), v.strip()
            rules.append(("" if u == "ε" else u, "" if v == "ε" else v))
        return PrefixMap(tuple(rules))


IDENTITY = PrefixMap((("", ""),))


def compose(g: PrefixMap, f: PrefixMap) -> PrefixMap:
    """g after f, as the coarsest common prefix refinement of the rule sets."""
    out = []
    for u, v in f.rules:
        for p, q in g.rules:
            if p.startswith(v):
                out.append((u + p[len(v):], q))
            elif v.startswith(p):
                out.append((u, q + v[len(p):]))
    return PrefixMap(tuple(out))


def power(m: PrefixMap, n: int) -> PrefixMap:
    if n == 0:
        return IDENTITY
    if n < 0:
        return power(m.inverse(), -n)
    out = m
    for _ in range(n - 1):
        out = compose(m, out)
    return out


@dataclass(frozen=True)
class GeneratedMap:
    """A countable enumeration of pairwise disjoint prefix rules.

    kind "odometer" is the built-in infinite family 1^k 0 -> 0^k 1 (add one,
    carry to the right); kind "rules" is an explicit finite enumeration whose
    domain is taken to be exhausted by the listed source cylinders.
    """

    kind: str
    rules: tuple[tuple[str, str], ...] = ()
    inverted: bool = False

    def __post_init__(self):
        if self.kind not in ("odometer", "rules"):
            raise ParseError(f"unknown generated-map kind {self.kind!r}")
        if self.kind == "rules":
            cleaned = tuple((check_word(u), check_word(v)) for u, v in self.rules)
            object.__setattr__(self, "rules", cleaned)

    def violations(self) -> tuple[str, ...]:
        if self.kind == "odometer":
            return ()
        if not self.rules:
            return ("enumeration has no rules",)
        return PrefixMap(self.rules).violations()

    @property
    def is_finite(self) -> bool:
        return self.kind == "rules"

    @property
    def rule_count(self) -> int | None:
        return len(self.rules) if self.is_finite else None

    def has_rule(self, i: int) -> bool:
        if i < 0:
            return False
        return True if self.kind == "odometer" else i < len(self.rules)

    def rule(self, i: int) -> tuple[str, str]:
        if not self.has_rule(i):
            raise IndexError(f"enumeration has no rule {i}")
        if self.kind == "odometer":
            u, v = "1" * i + "0", "0" * i + "1"
        else:
            u, v = self.rules[i]
        return (v, u) if self.inverted else (u, v)

    def truncation(self, k: int) -> PrefixMap:
        """The clopen map made of rules 0..k (capped for finite enumerations)."""
        if k < 0:
            return PrefixMap(())
        top = k if self.kind == "odometer" else min(k, len(self.rules) - 1)
        return PrefixMap(tuple(self.rule(i) for i in range(top + 1)))

    def inverse(self) -> "GeneratedMap":
        return dataclasses.replace(self, inverted=not self.inverted)

    def rule_index_for(self, x: Point) -> int | None:
        if self.kind == "odometer":
            symbol = "1" if self.inverted else "0"
            window = x.preperiod + x.period
            pos = window.find(symbol)
            return pos if pos >= 0 else None
        for i in range(len(self.rules)):
            u, _ = self.rule(i)
            if x.starts_with(u):
                return i
        return None

    def apply_point(self, x: Point) -> tuple[Point, int]:
        """Apply the unique matching rule; returns (image, rule index)."""
        i = self.rule_index_for(x)
        if i is None:
            raise NotInDomain(f"{x} matches no rule of the enumeration")
        u, v = self.rule(i)
        return x.shift(len(u)).with_prefix(v), i


ODOMETER = GeneratedMap("odometer")
