"""Exhausting an enumerated action by clopen stages and stacking the levels.

An enumeration with infinitely many rules acts on an open, non-clopen
domain.  Each stage keeps finitely many rules and is an honest clopen
action; the germ relations of the stages filter the full relation, every
true germ instance already lives at some finite stage, and the finite cell
relations of successive stages assemble into a leveled multigraph whose
vertex sizes obey an exact counting identity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .action import ZPartialAction
from .cantor import ClopenSet, Point, extensions
from .cells import CellPartition, adapted_depth, cell_partition
from .envelope import GermPair, ProbeReport, related
from .errors import (
    CapExceeded,
    EngineError,
    LevelRequired,
    NotInDomain,
    ParseError,
)
from .prefix_map import GeneratedMap, PrefixMap


@dataclass(frozen=True)
class Exhaustion:
    """Schedule of clopen stages: stage k keeps the first count(k) rules."""

    generated: GeneratedMap
    counts: tuple[int, ...] | None = None

    def __post_init__(self):
        if not isinstance(self.generated, GeneratedMap):
            raise ParseError("an exhaustion needs an enumerated generator")
        if self.counts is not None:
            counts = tuple(int(c) for c in self.counts)
            if any(c < 1 for c in counts) or list(counts) != sorted(counts):
                raise ParseError("rule counts must be nondecreasing and >= 1")
            object.__setattr__(self, "counts", counts)

    def count(self, k: int) -> int:
        if k < 0:
            raise ValueError("stage must be >= 0")
        if self.counts is None:
            if self.generated.is_finite:
                return min(k + 1, self.generated.rule_count)
            return k + 1
        if k >= len(self.counts):
            raise LevelRequired(f"exhaustion schedule has no stage {k}")
        return self.counts[k]

    def level_map(self, k: int) -> PrefixMap:
        return self.generated.truncation(self.count(k) - 1)

    def union_set(self, k: int) -> ClopenSet:
        """U_k: where one forward step of stage k is defined."""
        return self.level_map(k).domain()

    def action(self, k: int) -> ZPartialAction:
        return ZPartialAction(self.level_map(k))


def restrict(g: GeneratedMap, k: int) -> ZPartialAction:
    """The clopen action generated by the first k+1 rules of g."""
    if k < 0:
        raise ValueError("stage must be >= 0")
    return ZPartialAction(g.truncation(k))


def _as_exhaustion(g) -> Exhaustion:
    if isinstance(g, Exhaustion):
        return g
    if isinstance(g, GeneratedMap):
        return Exhaustion(g)
    if isinstance(g, ZPartialAction) and isinstance(g.generator, GeneratedMap):
        return Exhaustion(g.generator, g.counts)
    raise ParseError("inclusion witnesses need an enumerated generator")


def inclusion_witness(
    g, r: int, x: Point, s: int, y: Point, cap: int = 64
) -> int:
    """Least stage K whose relation already contains the instance (r,x,s,y).

    The orbit from the lower slot to the higher one is walked one rule at a
    time; the stage must cover every rule index used on the way.  The result
    is re-checked by running the stage-K relation on the pair.
    """
    ex = _as_exhaustion(g)
    steps = r - s
    p, goal = (x, y) if steps >= 0 else (y, x)
    top = -1
    for _ in range(abs(steps)):
        p, idx = ex.generated.apply_point(p)
        top = max(top, idx)
    if p != goal:
        raise NotInDomain(f"({r}, {x}) and ({s}, {y}) are not related")

    level = 0
    while ex.count(level) <= top:
        level += 1
        if level > cap:
            raise CapExceeded(f"no stage up to {cap} covers rule {top}")
    a = ZPartialAction(ex.generated, ex.counts)
    if not related(a, GermPair(r, x), GermPair(s, y), level=level):
        raise EngineError(f"stage {level} fails to relate the verified pair")
    return level


# --------------------------------------------------------------------------
# Finite truncations


def _leveled_action(g, k: int) -> ZPartialAction:
    if isinstance(g, PrefixMap):
        return ZPartialAction(g)
    if isinstance(g, GeneratedMap):
        return Exhaustion(g).action(k)
    if isinstance(g, Exhaustion):
        return g.action(k)
    if isinstance(g, ZPartialAction):
        return g if g.clopen else g.at_level(k)
    raise ParseError(f"cannot build a stage from {type(g).__name__}")


@dataclass(frozen=True)
class TruncatedRelation:
    """Cell relation of stage k on slots |t| <= n at depth d."""

    k: int
    n: int
    d: int
    partition: CellPartition

    @property
    def classes(self):
        return self.partition.classes

    @property
    def units(self):
        return self.partition.units

    @property
    def sizes(self) -> tuple[int, ...]:
        return self.partition.sizes

    def related_units(self, u1, u2) -> bool:
        look = self.partition.lookup()
        return look[u1] == look[u2]

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "d": self.d,
            "classes": [[[t, w] for t, w in cls] for cls in self.classes],
        }


def truncated_relation(g, k: int, n: int, d: int) -> TruncatedRelation:
    return TruncatedRelation(k, n, d, cell_partition(_leveled_action(g, k), n, d))


def inclusion_probe(g, first, second) -> ProbeReport:
    """Every related cell pair of the coarse stage stays related at the fine one.

    Pairs are pushed forward by appending each suffix of the depth gap to
    both cells; the fine partition must keep every pushed pair together.
    """
    (k1, n1, d1), (k2, n2, d2) = first, second
    if k2 < k1 or n2 < n1 or d2 < d1:
        raise ParseError("second stage must refine the first")
    coarse = truncated_relation(g, k1, n1, d1)
    fine = truncated_relation(g, k2, n2, d2)
    look = fine.partition.lookup()
    checked = 0
    bad: list[str] = []
    for cls in coarse.classes:
        for r, w in cls:
            for s, wp in cls:
                for z in extensions("", d2 - d1):
                    checked += 1
                    if look[(r, w + z)] != look[(s, wp + z)]:
                        bad.append(
                            f"({r},{w + z}) and ({s},{wp + z}) split when refined"
                        )
    return ProbeReport(checked, tuple(bad))


# --------------------------------------------------------------------------
# Leveled diagrams

Schedule = tuple[tuple[int, int, int], ...]


def default_schedule(g, levels: int) -> Schedule:
    """Stage m uses (k, n) = (m, m+1) at the least workable depth."""
    out = []
    d_prev = 0
    for m in range(levels):
        n = m + 1
        d = max(adapted_depth(_leveled_action(g, m), n), d_prev)
        out.append((m, n, d))
        d_prev = d
    return tuple(out)


@dataclass(frozen=True)
class BratteliLevel:
    m: int
    k: int
    n: int
    d: int
    vertices: tuple[tuple[int, int, int], ...]  # (id, size, fresh)


@dataclass(frozen=True)
class BratteliDiagram:
    levels: tuple[BratteliLevel, ...]
    edges: tuple[tuple[int, int, int, int], ...]  # (m, src, dst, mult)


def bratteli_build(g, schedule: Schedule) -> BratteliDiagram:
    """Stack the stage partitions of a schedule into a leveled diagram.

    Vertices at level m are the classes of the stage relation; an edge
    multiplicity counts the suffix-refined copies of a coarse class lying
    inside a fine class.  Fresh units are those using slots beyond the
    previous bound; the identity size' = sum(mult * size) + fresh is
    enforced at every level.
    """
    schedule = tuple((int(k), int(n), int(d)) for k, n, d in schedule)
    for a, b in zip(schedule, schedule[1:]):
        if any(x > y for x, y in zip(a, b)):
            raise ParseError(f"schedule steps backwards from {a} to {b}")

    parts = [truncated_relation(g, k, n, d) for k, n, d in schedule]
    levels: list[BratteliLevel] = []
    edges: list[tuple[int, int, int, int]] = []
    for m, tr in enumerate(parts):
        sizes = tr.sizes
        if m == 0:
            fresh = list(sizes)
        else:
            prev_n = parts[m - 1].n
            fresh = [
                sum(1 for t, _ in cls if abs(t) > prev_n) for cls in tr.classes
            ]
        levels.append(
            BratteliLevel(
                m, tr.k, tr.n, tr.d,
                tuple((i, sizes[i], fresh[i]) for i in range(len(sizes))),
            )
        )
        if m + 1 == len(parts):
            continue
        nxt = parts[m + 1]
        look = nxt.partition.lookup()
        mult: dict[tuple[int, int], int] = {}
        for i, cls in enumerate(tr.classes):
            for z in extensions("", nxt.d - tr.d):
                targets = {look[(t, w + z)] for t, w in cls}
                if len(targets) != 1:
                    raise EngineError(
                        f"refined copy of class {i} splits across fine classes"
                    )
                j = targets.pop()
                mult[(i, j)] = mult.get((i, j), 0) + 1
        for (i, j), c in sorted(mult.items()):
            edges.append((m, i, j, c))

    for m in range(1, len(parts)):
        prev_sizes = parts[m - 1].sizes
        incoming: dict[int, int] = {}
        for em, i, j, c in edges:
            if em == m - 1:
                incoming[j] = incoming.get(j, 0) + c * prev_sizes[i]
        for j, size, fr in levels[m].vertices:
            if size != incoming.get(j, 0) + fr:
                raise EngineError(
                    f"dimension identity fails at level {m} vertex {j}: "
                    f"{size} != {incoming.get(j, 0)} + {fr}"
                )
    return BratteliDiagram(tuple(levels), tuple(edges))


def diagram_to_json(d: BratteliDiagram) -> str:
    obj = {
        "levels": [
            {
                "m": lv.m,
                "params": {"k": lv.k, "n": lv.n, "d": lv.d},
                "vertices": [
                    {"id": vid, "size": size, "fresh": fresh}
                    for vid, size, fresh in lv.vertices
                ],
            }
            for lv in d.levels
        ],
        "edges": [
            {"from": [m, i], "to": [m + 1, j], "mult": c}
            for m, i, j, c in d.edges
        ],
    }
    return json.dumps(obj, indent=2) + "\n"


def _require_keys(obj: dict, keys: set[str], what: str) -> None:
    if not isinstance(obj, dict) or set(obj) != keys:
        raise ParseError(f"{what} must have exactly the keys {sorted(keys)}")


def diagram_from_json(text: str) -> BratteliDiagram:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad diagram JSON: {exc}") from exc
    _require_keys(obj, {"levels", "edges"}, "diagram")
    levels = []
    for lv in obj["levels"]:
        _require_keys(lv, {"m", "params", "vertices"}, "level")
        _require_keys(lv["params"], {"k", "n", "d"}, "params")
        verts = []
        for v in lv["vertices"]:
            _require_keys(v, {"id", "size", "fresh"}, "vertex")
            verts.append((int(v["id"]), int(v["size"]), int(v["fresh"])))
        p = lv["params"]
        levels.append(
            BratteliLevel(
                int(lv["m"]), int(p["k"]), int(p["n"]), int(p["d"]), tuple(verts)
            )
        )
    edges = []
    for e in obj["edges"]:
        _require_keys(e, {"from", "to", "mult"}, "edge")
        (m, i), (m2, j) = e["from"], e["to"]
        if m2 != m + 1:
            raise ParseError(f"edge jumps from level {m} to {m2}")
        edges.append((int(m), int(i), int(j), int(e["mult"])))
    return BratteliDiagram(tuple(levels), tuple(edges))


def diagram_to_dot(d: BratteliDiagram) -> str:
    lines = ["digraph bratteli {", "  rankdir=TB;"]
    for lv in d.levels:
        nodes = " ".join(
            f'L{lv.m}_{vid} [label="{size}"];' for vid, size, _ in lv.vertices
        )
        lines.append(f"  {{ rank=same; {nodes} }}")
    for m, i, j, c in d.edges:
        if c == 0:
            continue
        lines.append(f'  L{m}_{i} -> L{m + 1}_{j} [label="{c}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export(d: BratteliDiagram, fmt: str) -> str:
    if fmt == "json":
        return diagram_to_json(d)
    if fmt == "dot":
        return diagram_to_dot(d)
    raise ParseError(f"unknown export format {fmt!r}")
