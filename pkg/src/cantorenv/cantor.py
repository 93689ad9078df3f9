"""Exact arithmetic on the binary Cantor space {0,1}^infinity.

Clopen subsets are finite unions of cylinders [w] = {x : x starts with w}.  The
canonical form is a lexicographically sorted prefix-free antichain in which every
sibling pair {w0, w1} has been merged to w, so set equality is tuple equality and
[w] is a subset of a canonical union exactly when some listed word is a prefix
of w.  Points are eventually periodic sequences pre.per^infinity, stored with a
primitive period and a minimal preperiod, so point equality is field equality.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DepthTooSmall, ParseError

ALPHABET = "01"


def check_word(word: str) -> str:
    if not isinstance(word, str) or any(c not in ALPHABET for c in word):
        raise ParseError(f"not a binary word: {word!r}")
    return word


def sibling(word: str) -> str:
    """The word naming the other half of the parent cylinder."""
    if not word:
        raise ValueError("the full space has no sibling")
    return word[:-1] + ("1" if word[-1] == "0" else "0")


def extensions(word: str, depth: int) -> list[str]:
    """All depth-`depth` words extending `word`, in left-to-right order."""
    gap = depth - len(word)
    if gap < 0:
        raise DepthTooSmall(f"depth {depth} is below |{word!r}|")
    if gap == 0:
        return [word]
    return [word + format(i, f"0{gap}b") for i in range(2**gap)]


def primitive_root(word: str) -> str:
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d]
    return word


@dataclass(frozen=True)
class Point:
    """Eventually periodic point pre.per^infinity, canonicalized on construction.

    Canonical form: the period is primitive, and the preperiod does not end with
    the symbol the period ends with (otherwise the boundary can be rotated).
    """

    preperiod: str = ""
    period: str = "0"

    def __post_init__(self):
        check_word(self.preperiod)
        check_word(self.period)
        if not self.period:
            raise ParseError("period must be nonempty")
        per = primitive_root(self.period)
        pre = self.preperiod
        while pre and pre[-1] == per[-1]:
            per = per[-1] + per[:-1]
            pre = pre[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    def unroll(self, n: int) -> str:
        """The first n symbols of the sequence."""
        if n <= len(self.preperiod):
            return self.preperiod[:n]
        reps = (n - len(self.preperiod)) // len(self.period) + 1
        return (self.preperiod + self.period * reps)[:n]

    def shift(self, n: int) -> "Point":
        """Drop the first n symbols."""
        if n <= len(self.preperiod):
            return Point(self.preperiod[n:], self.period)
        k = (n - len(self.preperiod)) % len(self.period)
        return Point("", self.period[k:] + self.period[:k])

    def with_prefix(self, word: str) -> "Point":
        return Point(word + self.preperiod, self.period)

    def starts_with(self, word: str) -> bool:
        return self.unroll(len(word)) == word

    def description_length(self) -> int:
        return len(self.preperiod) + len(self.period)

    def __str__(self) -> str:
        return f"{self.preperiod}({self.period})"

    @staticmethod
    def parse(text: str) -> "Point":
        text = text.strip()
        if not text.endswith(")") or "(" not in text:
            raise ParseError(f"point syntax is 'pre(per)': {text!r}")
        pre, per = text[:-1].split("(", 1)
        return Point(pre, per)


MIN = Point("", "0")
MAX = Point("", "1")


def common_prefix_length(a: Point, b: Point, limit: int) -> int:
    """Length of the common prefix of two points, capped at `limit`."""
    ua, ub = a.unroll(limit), b.unroll(limit)
    i = 0
    while i < limit and ua[i] == ub[i]:
        i += 1
    return i


def normalize_words(words) -> tuple[str, ...]:
    """Canonical antichain for a union of cylinders.

    Shorter words absorb their extensions, then sibling pairs are merged until
    no pair {w0, w1} remains.
    """
    by_length = sorted({check_word(w) for w in words}, key=len)
    kept: list[str] = []
    for w in by_length:
        if not any(w.startswith(p) for p in kept):
            kept.append(w)
    live = set(kept)
    merged = True
    while merged:
        merged = False
        for w in sorted(live, key=len, reverse=True):
            if w and w in live and sibling(w) in live:
                live.discard(w)
                live.discard(sibling(w))
                live.add(w[:-1])
                merged = True
    return tuple(sorted(live))


def _complement_words(words: list[str]) -> list[str]:
    # words are suffixes relative to the current node of the binary tree
    if any(w == "" for w in words):
        return []
    if not words:
        return [""]
    out = []
    for b in ALPHABET:
        tails = [w[1:] for w in words if w[0] == b]
        out.extend(b + t for t in _complement_words(tails))
    return out


@dataclass(frozen=True)
class ClopenSet:
    """A clopen subset of the Cantor space in canonical antichain form."""

    words: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "words", normalize_words(self.words))

    @staticmethod
    def cylinder(word: str) -> "ClopenSet":
        return ClopenSet((word,))

    def is_empty(self) -> bool:
        return not self.words

    def is_full(self) -> bool:
        return self.words == ("",)

    def max_depth(self) -> int:
        return max((len(w) for w in self.words), default=0)

    def union(self, other: "ClopenSet") -> "ClopenSet":
        return ClopenSet(self.words + other.words)

    def intersect(self, other: "ClopenSet") -> "ClopenSet":
        found = []
        for u in self.words:
            for v in other.words:
                if u.startswith(v) or v.startswith(u):
                    found.append(u if len(u) >= len(v) else v)
        return ClopenSet(tuple(found))

    def complement(self) -> "ClopenSet":
        return ClopenSet(tuple(_complement_words(list(self.words))))

    def difference(self, other: "ClopenSet") -> "ClopenSet":
        return self.intersect(other.complement())

    def subset_of(self, other: "ClopenSet") -> bool:
        # valid because canonical forms are fully sibling-merged
        return all(any(w.startswith(v) for v in other.words) for w in self.words)

    def contains_word(self, word: str) -> bool:
        """Whole-cylinder membership: [word] inside this set."""
        return any(word.startswith(v) for v in self.words)

    def contains_point(self, point: Point) -> bool:
        prefix = point.unroll(self.max_depth())
        return any(prefix.startswith(w) for w in self.words)

    def refine_to_depth(self, depth: int) -> tuple[str, ...]:
        if depth < self.max_depth():
            raise DepthTooSmall(
                f"depth {depth} cannot resolve words of length {self.max_depth()}"
            )
        return tuple(sorted(c for w in self.words for c in extensions(w, depth)))

    __or__ = union
    __and__ = intersect

    def __le__(self, other: "ClopenSet") -> bool:
        return self.subset_of(other)

    def __str__(self) -> str:
        if not self.words:
            return "{}"
        return "{" + ",".join("ε" if w == "" else w for w in self.words) + "}"

    @staticmethod
    def parse(text: str) -> "ClopenSet":
        text = text.strip()
        if not (text.startswith("{") and text.endswith("}")):
            raise ParseError(f"clopen syntax is '{{w1,w2}}': {text!r}")
        body = text[1:-1].strip()
        if not body:
            return ClopenSet(())
        words = tuple("" if w.strip() == "ε" else w.strip() for w in body.split(","))
        return ClopenSet(words)


EMPTY = ClopenSet(())
FULL = ClopenSet(("",))


def normalize(words) -> ClopenSet:
    """Canonicalize an arbitrary iterable of cylinder words."""
    return ClopenSet(tuple(words))
