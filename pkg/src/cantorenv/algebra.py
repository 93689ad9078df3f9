"""Finitely supported block and kernel algebras over a clopen action.

A block function carries finitely many blocks f_{r,s}, each a piecewise
constant function living on X_{s-r}, multiplied by the convolution that sums
over the middle slot and transports the second factor.  A kernel carries
entries k(r,s) living on X_{r-s}, multiplied matrix-style with the fiber
product alpha_p(alpha_{-p}(f) g) on each term.  Reindexing blocks by slot
negation exchanges the two pictures; every identity here is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .action import ZPartialAction, germ_index, kernel_tag, transport_index
from .errors import ParseError, SupportViolation
from .functions import ZERO_FUNC, PiecewiseConstant, Scalar, compose_with_map

Index = tuple[int, int]


def _canon_table(table, what: str):
    seen = set()
    out = []
    for key, func in table:
        key = (int(key[0]), int(key[1]))
        if key in seen:
            raise ParseError(f"duplicate {what} at {key}")
        seen.add(key)
        if not func.is_zero():
            out.append((key, func))
    return tuple(sorted(out))


def _table_to_json(table) -> list:
    return [
        [[r, s], {w: str(c) for w, c in func.pieces}]
        for (r, s), func in table
    ]


def _table_from_json(obj, what: str):
    if not isinstance(obj, list):
        raise ParseError(f"{what} serialization must be a list")
    table = []
    for item in obj:
        try:
            (r, s), pieces = item
            func = PiecewiseConstant(
                tuple((w, Scalar.parse(c)) for w, c in pieces.items())
            )
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad {what} item {item!r}: {exc}") from exc
        table.append(((int(r), int(s)), func))
    return tuple(table)


@dataclass(frozen=True)
class GroupoidFunction:
    """Finitely many blocks (r, s) -> function supported in X_{s-r}."""

    blocks: tuple[tuple[Index, PiecewiseConstant], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "blocks", _canon_table(self.blocks, "block"))

    def block(self, r: int, s: int) -> PiecewiseConstant:
        for key, func in self.blocks:
            if key == (r, s):
                return func
        return ZERO_FUNC

    @property
    def indices(self) -> tuple[Index, ...]:
        return tuple(key for key, _ in self.blocks)

    def is_zero(self) -> bool:
        return not self.blocks

    def __add__(self, other: "GroupoidFunction") -> "GroupoidFunction":
        keys = sorted(set(self.indices) | set(other.indices))
        return GroupoidFunction(
            tuple((k, self.block(*k) + other.block(*k)) for k in keys)
        )

    def __neg__(self) -> "GroupoidFunction":
        return GroupoidFunction(tuple((k, -f) for k, f in self.blocks))

    def __sub__(self, other: "GroupoidFunction") -> "GroupoidFunction":
        return self + (-other)

    def scale(self, c: Scalar) -> "GroupoidFunction":
        return GroupoidFunction(tuple((k, f.scale(c)) for k, f in self.blocks))

    def restrict_block(self, r: int, s: int) -> "GroupoidFunction":
        return GroupoidFunction((((r, s), self.block(r, s)),))

    def to_json(self) -> list:
        return _table_to_json(self.blocks)

    @staticmethod
    def from_json(obj) -> "GroupoidFunction":
        return GroupoidFunction(_table_from_json(obj, "block"))

    def __str__(self) -> str:
        if not self.blocks:
            return "0"
        return " + ".join(f"[{f}]@({r},{s})" for (r, s), f in self.blocks)


@dataclass(frozen=True)
class KernelElement:
    """Finitely many entries (r, s) -> function supported in X_{r-s}."""

    entries: tuple[tuple[Index, PiecewiseConstant], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", _canon_table(self.entries, "entry"))

    def entry(self, r: int, s: int) -> PiecewiseConstant:
        for key, func in self.entries:
            if key == (r, s):
                return func
        return ZERO_FUNC

    @property
    def indices(self) -> tuple[Index, ...]:
        return tuple(key for key, _ in self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def __add__(self, other: "KernelElement") -> "KernelElement":
        keys = sorted(set(self.indices) | set(other.indices))
        return KernelElement(
            tuple((k, self.entry(*k) + other.entry(*k)) for k in keys)
        )

    def __neg__(self) -> "KernelElement":
        return KernelElement(tuple((k, -f) for k, f in self.entries))

    def __sub__(self, other: "KernelElement") -> "KernelElement":
        return self + (-other)

    def scale(self, c: Scalar) -> "KernelElement":
        return KernelElement(tuple((k, f.scale(c)) for k, f in self.entries))

    def to_json(self) -> list:
        return _table_to_json(self.entries)

    @staticmethod
    def from_json(obj) -> "KernelElement":
        return KernelElement(_table_from_json(obj, "entry"))

    def __str__(self) -> str:
        if not self.entries:
            return "0"
        return " + ".join(
            f"[{f}]d{kernel_tag(r, s)}@({r},{s})" for (r, s), f in self.entries
        )


ZERO_BLOCKS = GroupoidFunction()
ZERO_KERNEL = KernelElement()


def validate_blocks(
    f: GroupoidFunction, a: ZPartialAction, level: int | None = None
) -> None:
    for (r, s), func in f.blocks:
        dom = a.domain(germ_index(r, s), level)
        if not func.support().subset_of(dom):
            raise SupportViolation(
                f"block ({r},{s}) supported on {func.support()}, "
                f"outside X_{germ_index(r, s)} = {dom}"
            )


def validate_entries(
    k: KernelElement, a: ZPartialAction, level: int | None = None
) -> None:
    for (r, s), func in k.entries:
        dom = a.domain(kernel_tag(r, s), level)
        if not func.support().subset_of(dom):
            raise SupportViolation(
                f"entry ({r},{s}) supported on {func.support()}, "
                f"outside X_{kernel_tag(r, s)} = {dom}"
            )


# --------------------------------------------------------------------------
# Block algebra


def convolve(
    f: GroupoidFunction,
    g: GroupoidFunction,
    a: ZPartialAction,
    level: int | None = None,
) -> GroupoidFunction:
    """Block (r, u) of f*g = sum over s of f_{r,s} (g_{s,u} o h_{r-s})."""
    validate_blocks(f, a, level)
    validate_blocks(g, a, level)
    acc: dict[Index, PiecewiseConstant] = {}
    for (r, s), fb in f.blocks:
        for (s2, u), gb in g.blocks:
            if s2 != s:
                continue
            moved = compose_with_map(gb, a.h(transport_index(r, s), level))
            term = fb * moved
            if term.is_zero():
                continue
            key = (r, u)
            acc[key] = acc.get(key, ZERO_FUNC) + term
    out = GroupoidFunction(tuple(sorted(acc.items())))
    validate_blocks(out, a, level)
    return out


def adjoint(
    f: GroupoidFunction, a: ZPartialAction, level: int | None = None
) -> GroupoidFunction:
    """Block (s, r) of f* = conjugate of f_{r,s}, transported by h_{s-r}."""
    validate_blocks(f, a, level)
    table = []
    for (r, s), func in f.blocks:
        moved = compose_with_map(func.conj(), a.h(transport_index(s, r), level))
        table.append(((s, r), moved))
    out = GroupoidFunction(tuple(table))
    validate_blocks(out, a, level)
    return out


def shift_blocks(f: GroupoidFunction, t: int) -> GroupoidFunction:
    """Translate both slots: new block (r, s) reads the old block (r+t, s+t)."""
    return GroupoidFunction(
        tuple(((r - t, s - t), func) for (r, s), func in f.blocks)
    )


# --------------------------------------------------------------------------
# Kernel algebra


def fiber_product(
    f: PiecewiseConstant,
    p: int,
    g: PiecewiseConstant,
    q: int,
    a: ZPartialAction,
    level: int | None = None,
) -> PiecewiseConstant:
    """(f d_p)(g d_q) = alpha_p(alpha_{-p}(f) g) d_{p+q}, value part only."""
    down = compose_with_map(f, a.h(p, level))
    prod = down * g
    return compose_with_map(prod, a.h(-p, level))


def kernel_multiply(
    k1: KernelElement,
    k2: KernelElement,
    a: ZPartialAction,
    level: int | None = None,
) -> KernelElement:
    """Matrix product with fiber products: (k1 k2)(r,s) = sum_t k1(r,t) k2(t,s)."""
    validate_entries(k1, a, level)
    validate_entries(k2, a, level)
    acc: dict[Index, PiecewiseConstant] = {}
    for (r, t), e1 in k1.entries:
        for (t2, s), e2 in k2.entries:
            if t2 != t:
                continue
            term = fiber_product(
                e1, kernel_tag(r, t), e2, kernel_tag(t, s), a, level
            )
            if term.is_zero():
                continue
            key = (r, s)
            acc[key] = acc.get(key, ZERO_FUNC) + term
    out = KernelElement(tuple(sorted(acc.items())))
    validate_entries(out, a, level)
    return out


def kernel_adjoint(
    k: KernelElement, a: ZPartialAction, level: int | None = None
) -> KernelElement:
    """Entry (r, s) of k* = conjugate of k(s, r), transported by h_{s-r}."""
    validate_entries(k, a, level)
    table = []
    for (s, r), func in k.entries:
        moved = compose_with_map(func.conj(), a.h(germ_index(r, s), level))
        table.append(((r, s), moved))
    out = KernelElement(tuple(table))
    validate_entries(out, a, level)
    return out


def shift_kernel(k: KernelElement, t: int) -> KernelElement:
    """Translate both slots: new entry (r, s) reads the old entry (r+t, s+t)."""
    return KernelElement(
        tuple(((r - t, s - t), func) for (r, s), func in k.entries)
    )


def corner(k: KernelElement, r: int, s: int) -> KernelElement:
    """Compression to the single entry (r, s)."""
    func = k.entry(r, s)
    if func.is_zero():
        return ZERO_KERNEL
    return KernelElement((((r, s), func),))


def row_part(k: KernelElement, t: int) -> KernelElement:
    return KernelElement(tuple(e for e in k.entries if e[0][0] == t))


def col_part(k: KernelElement, t: int) -> KernelElement:
    return KernelElement(tuple(e for e in k.entries if e[0][1] == t))


def norm_squared(k: KernelElement) -> Fraction:
    """Sum over entries of the squared sup of |value|; exact, never rooted."""
    return sum((func.sup_norm_sq() for _, func in k.entries), Fraction(0))


# --------------------------------------------------------------------------
# The reindexing isomorphism


def to_kernel(f: GroupoidFunction) -> KernelElement:
    """Entry (r, s) of the kernel = block (-r, -s) of f, tagged d_{r-s}."""
    return KernelElement(
        tuple(((-r, -s), func) for (r, s), func in f.blocks)
    )


def from_kernel(k: KernelElement) -> GroupoidFunction:
    """Inverse reindexing: block (r, s) = entry (-r, -s)."""
    return GroupoidFunction(
        tuple(((-r, -s), func) for (r, s), func in k.entries)
    )
