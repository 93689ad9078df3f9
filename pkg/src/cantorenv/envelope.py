"""The gluing relation on indexed points and its Hausdorffness.

A germ (r, x) is an index together with a point; two germs are related when
the point of one lies in the right domain and the right power of the
generator carries it to the other point.  The quotient of all germs by this
relation is Hausdorff exactly when every domain X_t is clopen, so the
decision procedure either materializes the domains as canonical clopen sets
or hunts for a limit point sitting on the boundary of the union U_k of an
exhaustion.  Probes for the range/source bijections and for the groupoid
laws on triples live here too.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .action import ZPartialAction, germ_index, transport_index
from .cantor import ClopenSet, Point, common_prefix_length
from .cells import CellPartition, cell_image_word, cell_partition
from .errors import BaseNotInDomain, LevelRequired, NoWitness, NotInDomain
from .prefix_map import GeneratedMap


@dataclass(frozen=True)
class GermPair:
    index: int
    point: Point

    def __str__(self) -> str:
        return f"[{self.index}, {self.point}]"


def related(
    a: ZPartialAction, p: GermPair, q: GermPair, level: int | None = None
) -> bool:
    """Whether (p.index, p.point) and (q.index, q.point) glue to one class."""
    if not a.domain(germ_index(p.index, q.index), level).contains_point(p.point):
        return False
    moved = a.apply(transport_index(p.index, q.index), p.point, level)
    return moved == q.point


@dataclass(frozen=True)
class ProbeReport:
    checked: int
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checked": self.checked,
            "violations": list(self.violations),
        }


def symmetry_transitivity_probe(
    a: ZPartialAction, triples, level: int | None = None
) -> ProbeReport:
    """Check reflexivity, symmetry and transitivity on supplied germ triples."""
    checked = 0
    bad: list[str] = []
    for p, q, r in triples:
        checked += 1
        for g in (p, q, r):
            if not related(a, g, g, level):
                bad.append(f"{g} not related to itself")
        if related(a, p, q, level) and not related(a, q, p, level):
            bad.append(f"{p} ~ {q} but not conversely")
        if (
            related(a, p, q, level)
            and related(a, q, r, level)
            and not related(a, p, r, level)
        ):
            bad.append(f"{p} ~ {q} ~ {r} but {p} !~ {r}")
    return ProbeReport(checked, tuple(bad))


# --------------------------------------------------------------------------
# Hausdorffness


@dataclass(frozen=True)
class HausdorffCertificate:
    verdict: str  # "clopen" | "non-clopen-witness" | "unknown"
    bound: int | None = None
    t: int | None = None
    point: Point | None = None
    depth: int | None = None
    domains: tuple[tuple[int, ClopenSet], ...] = ()

    def to_json(self) -> dict:
        out: dict = {"verdict": self.verdict}
        if self.verdict == "clopen":
            out["bound"] = self.bound
            out["domains"] = {str(t): str(s) for t, s in self.domains}
        elif self.verdict == "non-clopen-witness":
            out["t"] = self.t
            out["point"] = str(self.point)
            out["depth"] = self.depth
        else:
            out["depth"] = self.depth
        return out


def _union_sets(a: ZPartialAction, depth: int) -> list[ClopenSet]:
    """U_0 .. U_depth: domains of one forward step of each truncation."""
    return [a.at_level(k).domain(-1) for k in range(depth + 1)]


def _chain_limit(residuals) -> Point | None:
    """Limit point of a strictly growing nested chain of single cylinders."""
    words = []
    for res in residuals:
        if len(res.words) != 1:
            return None
        words.append(res.words[0])
    if len(words) < 2:
        return None
    for prev, cur in zip(words, words[1:]):
        if not (cur.startswith(prev) and len(cur) > len(prev)):
            return None
    # repeat the last observed increment forever
    return Point(words[-1], words[-1][len(words[-2]):])


def _witness_soundness(x: Point, unions) -> bool:
    last = unions[-1]
    if any(u.contains_point(x) for u in unions):
        return False
    for j in range(len(unions)):
        probe = ClopenSet.cylinder(x.unroll(j))
        if (probe & last).is_empty():
            return False
    return True


def hausdorff_decide(
    a: ZPartialAction, bound: int = 4, depth: int = 10
) -> HausdorffCertificate:
    """Certify every X_t clopen, or exhibit a boundary point of the union.

    Actions of a plain prefix map are settled exactly: each X_t for |t| up
    to the bound is computed as a canonical clopen set and shipped in the
    certificate.  For a generated enumeration the residuals X minus U_k are
    inspected for k up to the depth; a chain of strictly shrinking single
    cylinders pins down a limit point, which is then verified to avoid
    every U_k while its cylinders all meet U_depth.  Anything else is an
    honest "unknown".
    """
    if a.clopen or (isinstance(a.generator, GeneratedMap) and a.generator.is_finite):
        top = None
        if not a.clopen:
            top = a.generator.rule_count - 1
        full = a if a.clopen else a.at_level(top)
        doms = tuple((t, full.domain(t)) for t in range(-bound, bound + 1))
        return HausdorffCertificate("clopen", bound=bound, domains=doms)

    residuals = []
    unions = _union_sets(a, depth)
    for u in unions:
        residuals.append(u.complement())
    if residuals and residuals[-1].is_empty():
        full = a.at_level(depth)
        doms = tuple((t, full.domain(t)) for t in range(-bound, bound + 1))
        return HausdorffCertificate("clopen", bound=bound, domains=doms)

    x = _chain_limit(residuals)
    if x is not None and _witness_soundness(x, unions):
        return HausdorffCertificate(
            "non-clopen-witness", t=-1, point=x, depth=depth
        )
    return HausdorffCertificate("unknown", depth=depth)


@dataclass(frozen=True)
class NonSeparablePair:
    first: GermPair
    second: GermPair
    approach: tuple[tuple[Point, Point], ...]

    def to_json(self) -> dict:
        return {
            "first": {"index": self.first.index, "point": str(self.first.point)},
            "second": {"index": self.second.index, "point": str(self.second.point)},
            "approach": [[str(x), str(y)] for x, y in self.approach],
        }


def nonseparable_pair(
    a: ZPartialAction, t: int, depth: int = 8
) -> NonSeparablePair:
    """Two distinct germ classes with no disjoint neighborhoods.

    Valid when X_t fails to be clopen for the generator index t = -1 (or
    its inverse t = +1): the witness limit x gives the class [-t, x], the
    transported limit y gives [0, y], and the approach points x_j in U_depth
    agree with x to depth j while their images agree with y to depth j.
    Every claimed property is re-verified before the pair is returned.
    """
    if a.clopen or a.generator.is_finite:
        raise NoWitness("the action is clopen; all classes are separated")
    if t not in (-1, 1):
        raise NoWitness(f"witness search only covers the generator index, not t={t}")

    side = a if t == -1 else ZPartialAction(a.generator.inverse(), a.counts)
    other = ZPartialAction(side.generator.inverse(), side.counts)

    unions = _union_sets(side, depth)
    x = _chain_limit([u.complement() for u in unions])
    if x is None or not _witness_soundness(x, unions):
        raise NoWitness(f"no single-cylinder residual chain for t={t}")
    y = _chain_limit([u.complement() for u in _union_sets(other, depth)])
    if y is None:
        raise NoWitness("transported limit is not a single-cylinder chain")

    last = unions[-1]
    approach = []
    for j in range(1, depth + 1):
        meet = last & ClopenSet.cylinder(x.unroll(j))
        if meet.is_empty():
            raise NoWitness(f"cylinder of depth {j} around {x} misses the union")
        xj = Point(meet.words[0], "0")
        yj = side.apply(1, xj, level=depth)
        approach.append((xj, yj))

    first, second = GermPair(-t, x), GermPair(0, y)
    for j, (xj, yj) in enumerate(approach, start=1):
        if not related(a, GermPair(-t, xj), GermPair(0, yj), level=depth):
            raise NoWitness(f"approach pair {xj}, {yj} is not related")
        if common_prefix_length(xj, x, depth) < min(j, depth):
            raise NoWitness(f"approach point {xj} strays from {x}")
        if common_prefix_length(yj, y, depth) < min(j, depth):
            raise NoWitness(f"image point {yj} strays from {y}")
    for k in range(depth + 1):
        if related(a, first, second, level=k):
            raise NoWitness(f"{first} and {second} merge at level {k}")
    return NonSeparablePair(first, second, tuple(approach))


# --------------------------------------------------------------------------
# Etale structure and groupoid laws


@dataclass(frozen=True)
class EtaleReport:
    t: int
    s: int
    base: ClopenSet
    image: ClopenSet
    diagonal: bool
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "t": self.t,
            "s": self.s,
            "base": str(self.base),
            "image": str(self.image),
            "diagonal": self.diagonal,
            "violations": list(self.violations),
        }


def etale_probe(
    a: ZPartialAction,
    t: int,
    s: int,
    base: ClopenSet,
    level: int | None = None,
) -> EtaleReport:
    """Range/source bijectivity over one basic open.

    The basic open over (t, s) with the given base consists of the pairs
    ((t, x), (s, y)) with x in the base and y its transport; the range map
    keeps (t, x) and the source map keeps (s, y).  Bijectivity is checked
    cell by cell: transported cells must be pairwise distinct and union up
    to exactly the transported base.
    """
    if not base.subset_of(a.domain(germ_index(t, s), level)):
        raise BaseNotInDomain(
            f"base {base} is not inside X_{germ_index(t, s)}"
        )
    h = a.h(transport_index(t, s), level)
    image = h.image_set(base)
    bad: list[str] = []

    d = max(
        base.max_depth(),
        max((len(u) for u, _ in h.rules), default=0),
    )
    cells = base.refine_to_depth(d) if not base.is_empty() else ()
    moved = [cell_image_word(h, w) for w in cells]
    if len(set(moved)) != len(moved):
        bad.append("transport is not injective on cells")
    if ClopenSet(tuple(moved)) != image:
        bad.append("cell images do not assemble to the computed image")
    if h.preimage_set(image) != base:
        bad.append("source fibers do not pull back to the base")
    if t == s:
        if image != base:
            bad.append("diagonal block moved its base")
    return EtaleReport(t, s, base, image, t == s, tuple(bad))


@dataclass(frozen=True)
class GroupoidElement:
    """An arrow (x, r, s): the point x in X_{s-r} seen from slots r and s."""

    point: Point
    left: int
    right: int

    def __str__(self) -> str:
        return f"({self.point}, {self.left}, {self.right})"


def element_valid(
    a: ZPartialAction, z: GroupoidElement, level: int | None = None
) -> bool:
    return a.domain(germ_index(z.left, z.right), level).contains_point(z.point)


def composable(
    a: ZPartialAction,
    z1: GroupoidElement,
    z2: GroupoidElement,
    level: int | None = None,
) -> bool:
    if z1.right != z2.left:
        return False
    return z2.point == a.apply(
        transport_index(z1.left, z1.right), z1.point, level
    )


def compose_elements(
    a: ZPartialAction,
    z1: GroupoidElement,
    z2: GroupoidElement,
    level: int | None = None,
) -> GroupoidElement:
    if not composable(a, z1, z2, level):
        raise NotInDomain(f"{z1} and {z2} do not compose")
    return GroupoidElement(z1.point, z1.left, z2.right)


def invert_element(
    a: ZPartialAction, z: GroupoidElement, level: int | None = None
) -> GroupoidElement:
    moved = a.apply(transport_index(z.left, z.right), z.point, level)
    return GroupoidElement(moved, z.right, z.left)


def groupoid_probe(
    a: ZPartialAction, samples, level: int | None = None
) -> ProbeReport:
    """Groupoid laws on composable triples (z1, z2, z3).

    Per triple: membership of each arrow, the definedness criterion (both
    positively and against a corrupted middle point), associativity of the
    two bracketings, and the two inverse laws against range/source units.
    """
    checked = 0
    bad: list[str] = []
    for z1, z2, z3 in samples:
        checked += 1
        for z in (z1, z2, z3):
            if not element_valid(a, z, level):
                bad.append(f"{z} is not an arrow")
        if not (composable(a, z1, z2, level) and composable(a, z2, z3, level)):
            bad.append(f"sample chain {z1}, {z2}, {z3} is not composable")
            continue

        if z1.left != z1.right or z1.point != z2.point:
            head = z2.point.shift(1)
            flip = "1" if z2.point.unroll(1) == "0" else "0"
            corrupt = replace(z2, point=head.with_prefix(flip))
            if composable(a, z1, corrupt, level):
                bad.append(f"{z1} composes with corrupted {corrupt}")

        left = compose_elements(a, compose_elements(a, z1, z2, level), z3, level)
        right = compose_elements(a, z1, compose_elements(a, z2, z3, level), level)
        if left != right:
            bad.append(f"associativity fails: {left} != {right}")

        inv = invert_element(a, z1, level)
        if compose_elements(a, z1, inv, level) != GroupoidElement(
            z1.point, z1.left, z1.left
        ):
            bad.append(f"{z1} times its inverse is not the range unit")
        if compose_elements(a, inv, z1, level) != GroupoidElement(
            inv.point, z1.right, z1.right
        ):
            bad.append(f"inverse of {z1} times it is not the source unit")
        unit = GroupoidElement(z1.point, z1.left, z1.left)
        if compose_elements(a, unit, unit, level) != unit:
            bad.append(f"unit {unit} is not idempotent")
    return ProbeReport(checked, tuple(bad))


def quotient_decomposition(
    a: ZPartialAction, bound: int, depth: int
) -> CellPartition:
    """Finite cell shadow of the germ quotient for a clopen action."""
    if not a.clopen:
        raise LevelRequired("truncate with at_level() before taking quotients")
    return cell_partition(a, bound, depth)
