"""Partial Z-actions generated by iterating a prefix map.

The generator h gives h_t = h^t with domain X_{-t} and image X_t, so X_{-n} is
where n forward steps are defined and X_n is where n backward steps are
defined.  A generated enumeration is handled through its clopen truncations:
level k uses the map made of the first rules of the enumeration.

Index conventions are owned by the three helpers below and used everywhere:

* germ_index(r, s) = s - r: the germ (r, x) is glued to (s, y) exactly when
  x lies in X_{germ_index(r, s)} and applying h_{transport_index(r, s)} to x
  gives y.
* transport_index(r, s) = r - s: the power of h carrying the point of slot r
  to the point of slot s.
* kernel_tag(r, s) = r - s: the fiber index of a kernel entry at (r, s); the
  entry function must be supported in X_{kernel_tag(r, s)}.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cantor import FULL, ClopenSet, Point, extensions
from .errors import LevelRequired, ParseError, SupportViolation
from .functions import PiecewiseConstant, compose_with_map
from .prefix_map import IDENTITY, GeneratedMap, PrefixMap, compose


def germ_index(r: int, s: int) -> int:
    return s - r


def transport_index(r: int, s: int) -> int:
    return r - s


def kernel_tag(r: int, s: int) -> int:
    return r - s


class ZPartialAction:
    """The family {X_t, h_t} generated by a prefix map or an enumeration.

    Powers and domains are cached per (level, t); entries are immutable, so a
    lost cache race only recomputes the same value.
    """

    def __init__(self, generator: PrefixMap | GeneratedMap, counts=None):
        self.generator = generator
        if counts is not None:
            counts = tuple(int(c) for c in counts)
            if any(c < 1 for c in counts) or list(counts) != sorted(counts):
                raise ParseError("rule counts must be nondecreasing and >= 1")
        self.counts = counts
        self._powers: dict[tuple[int | None, int], PrefixMap] = {}

    @property
    def clopen(self) -> bool:
        return isinstance(self.generator, PrefixMap)

    def _base(self, level: int | None) -> PrefixMap:
        if self.clopen:
            return self.generator
        if level is None:
            raise LevelRequired("generated action needs a truncation level")
        if self.counts is not None:
            if level >= len(self.counts):
                raise LevelRequired(
                    f"exhaustion schedule has no level {level}"
                )
            return self.generator.truncation(self.counts[level] - 1)
        return self.generator.truncation(level)

    def at_level(self, level: int) -> "ZPartialAction":
        """The clopen action of the level-`level` truncation."""
        if self.clopen:
            return self
        return ZPartialAction(self._base(level))

    def h(self, t: int, level: int | None = None) -> PrefixMap:
        key = (None if self.clopen else level, t)
        cached = self._powers.get(key)
        if cached is not None:
            return cached
        if t == 0:
            out = IDENTITY
        elif t > 0:
            out = compose(self._base(level), self.h(t - 1, level))
        else:
            out = self.h(-t, level).inverse()
        self._powers[key] = out
        return out

    def domain(self, t: int, level: int | None = None) -> ClopenSet:
        """X_t: the set where t backward steps (equivalently -t forward) live."""
        return self.h(t, level).image()

    def apply(self, t: int, x: Point, level: int | None = None) -> Point:
        return self.h(t, level).apply_point(x)


@dataclass(frozen=True)
class AxiomViolation:
    axiom: int
    t: int
    s: int | None
    detail: str

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "t": self.t, "s": self.s, "detail": self.detail}


@dataclass(frozen=True)
class AxiomsReport:
    bound: int
    violations: tuple[AxiomViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "bound": self.bound,
            "violations": [v.to_json() for v in self.violations],
        }


def generated_family(a: ZPartialAction, bound: int, level: int | None = None):
    """The explicit family {(X_t, h_t)} for |t| <= bound."""
    return {
        t: (a.domain(t, level), a.h(t, level))
        for t in range(-bound, bound + 1)
    }


def axioms_check(family: dict, bound: int | None = None) -> AxiomsReport:
    """Check the partial-action axioms on an explicit family {t: (X_t, h_t)}.

    (1) X_0 is everything and h_0 is the identity, and each h_t maps X_{-t}
    onto X_t; (2) h_t(X_{-t} & X_s) = X_t & X_{t+s} as canonical clopen sets;
    (3) h_t(h_s(x)) = h_{t+s}(x) on one representative point per cylinder of
    X_{-s} & X_{-s-t}, refined finely enough that representatives decide cells.
    All violations are collected, not just the first.
    """
    if bound is None:
        bound = max(abs(t) for t in family)
    viol = []

    delta0, h0 = family[0]
    if not delta0.is_full():
        viol.append(AxiomViolation(1, 0, None, f"X_0 = {delta0}, expected full"))
    if not h0.domain().is_full() or any(u != v for u, v in h0.rules):
        viol.append(AxiomViolation(1, 0, None, f"h_0 = {h0} is not the identity"))

    for t, (delta, h) in family.items():
        if -t not in family:
            continue
        if h.domain() != family[-t][0]:
            viol.append(
                AxiomViolation(
                    1, t, None,
                    f"dom(h_{t}) = {h.domain()} differs from X_{-t} = {family[-t][0]}",
                )
            )
        if h.image() != delta:
            viol.append(
                AxiomViolation(
                    1, t, None,
                    f"ran(h_{t}) = {h.image()} differs from X_{t} = {delta}",
                )
            )

    span = range(-bound, bound + 1)
    for t in span:
        for s in span:
            if abs(t + s) > bound:
                continue
            left = family[t][1].image_set(family[-t][0] & family[s][0])
            right = family[t][0] & family[t + s][0]
            if left != right:
                viol.append(
                    AxiomViolation(
                        2, t, s, f"image {left} differs from {right}"
                    )
                )

    for t in span:
        for s in span:
            if abs(t + s) > bound:
                continue
            inter = family[-s][0] & family[-s - t][0]
            if inter.is_empty():
                continue
            h_t, h_s, h_ts = family[t][1], family[s][1], family[t + s][1]
            comp = compose(h_t, h_s)
            sources = [u for u, _ in comp.rules] + [u for u, _ in h_ts.rules]
            for w in inter.words:
                # refine [w] past every incident rule boundary; two tails per
                # cell make the pointwise test decide string equality exactly
                depth = max(
                    [len(w)] + [len(u) for u in sources if u.startswith(w)]
                )
                for cell in extensions(w, depth):
                    for rep in (Point(cell, "0"), Point(cell, "1")):
                        try:
                            via = h_t.apply_point(h_s.apply_point(rep))
                            direct = h_ts.apply_point(rep)
                        except Exception as exc:  # noqa: BLE001 - report it
                            viol.append(
                                AxiomViolation(
                                    3, t, s, f"undefined at {rep}: {exc}"
                                )
                            )
                            continue
                        if via != direct:
                            viol.append(
                                AxiomViolation(
                                    3, t, s,
                                    f"h_{t}h_{s}({rep}) = {via} != {direct}",
                                )
                            )
    return AxiomsReport(bound, tuple(viol))


def pullback(
    f: PiecewiseConstant, a: ZPartialAction, t: int, level: int | None = None
) -> PiecewiseConstant:
    """Transport f supported in X_{-t} to the function f o h_t^{-1} on X_t."""
    dom = a.domain(-t, level)
    if not f.support().subset_of(dom):
        raise SupportViolation(
            f"support {f.support()} escapes X_{-t} = {dom}"
        )
    return compose_with_map(f, a.h(-t, level))


def identity_family(bound: int) -> dict:
    """The trivial action where every h_t is the identity on everything."""
    return {t: (FULL, IDENTITY) for t in range(-bound, bound + 1)}
