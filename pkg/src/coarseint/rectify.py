"""Partitions into generator translates and bijective replacements for coarse maps.

The line splits into blocks B_n = (n + S_g) minus all earlier
translates, where S_g = {+-g**m}.  Every block lies inside a single
translate, so its diameter in the base-g metric is at most 2, and each
block meets every long enough window.  These blocks are the rooms of a
hotel: an almost-injective map is made injective by reassigning guests
within the room of their intended target (greedy_injection), and two
such injections pointing opposite ways merge into a genuine bijection
by walking the alternating chains of the Cantor-Schroeder-Bernstein
argument (csb_bijection).  closeness_audit then measures, exhaustively,
how far the final bijection strayed from the original map.

Everything here is a finite window truncation.  Where the underlying
argument leans on blocks being infinite, these functions either pad
the working window and retry or fail loudly; they never guess.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Callable

from .digits import check_base, distance

__all__ = [
    "RectifyError",
    "WindowTooSmallError",
    "ChainImbalanceError",
    "PartitionCover",
    "FiniteCoarseMap",
    "RectifyResult",
    "block_index",
    "build_partition",
    "greedy_injection",
    "csb_bijection",
    "closeness_audit",
    "bijective_representative",
]


class RectifyError(RuntimeError):
    """Base class for construction failures in this module."""


class WindowTooSmallError(RectifyError):
    """A block ran out of room for the elements assigned to it."""

    def __init__(self, block: int, needed: int, available: int):
        super().__init__(
            f"block {block} has {available} slots in the window but"
            f" {needed} elements to place"
        )
        self.block = block
        self.needed = needed
        self.available = available


class ChainImbalanceError(RectifyError):
    """A CSB chain starts and ends on the same side, so no bijection
    obeying the pointwise two-choice constraint exists on this window."""


def _leading_power(g: int, x: int) -> int:
    """Largest g**m <= x, for x >= 1."""
    p = 1
    while p * g <= x:
        p *= g
    return p


def _ceiling_power(g: int, x: int) -> int:
    """Smallest g**m >= x, for x >= 1."""
    p = 1
    while p < x:
        p *= g
    return p


def block_index(g: int, x: int) -> int:
    """The unique n >= 0 with x in B_n.

    Minimality over n of |x - n| being a power of g: positive x sit
    past their leading power, 0 belongs to block 1 (0 = 1 - 1), and
    negative x reach up to the smallest power covering them.
    """
    check_base(g)
    if x >= 1:
        return x - _leading_power(g, x)
    if x == 0:
        return 1
    return x + _ceiling_power(g, -x)


@dataclass(frozen=True)
class PartitionCover:
    """Blocks of the translate partition restricted to [lo, hi].

    blocks[n] lists, ascending, the window elements whose block index
    is n.  Construction double-checks that every listed element really
    differs from n by a power of g, and that the blocks tile the
    window exactly.
    """

    base: int
    lo: int
    hi: int
    blocks: dict[int, tuple[int, ...]]

    def block_of(self, x: int) -> int:
        return block_index(self.base, x)


def build_partition(g: int, lo: int, hi: int) -> PartitionCover:
    """Assign every window element to its block and verify the tiling."""
    check_base(g)
    if lo > hi:
        raise ValueError(f"empty window [{lo}, {hi}]")
    grouped: dict[int, list[int]] = {}
    for x in range(lo, hi + 1):
        grouped.setdefault(block_index(g, x), []).append(x)
    total = 0
    for n, members in grouped.items():
        for v in members:
            delta = abs(v - n)
            p = 1
            while p < delta:
                p *= g
            if p != delta:
                raise AssertionError(
                    f"{v} assigned to block {n} but |{v} - {n}| is not a power of {g}"
                )
        total += len(members)
    if total != hi - lo + 1:
        raise AssertionError("blocks do not tile the window")
    return PartitionCover(
        base=g,
        lo=lo,
        hi=hi,
        blocks={n: tuple(ms) for n, ms in sorted(grouped.items())},
    )


@dataclass(frozen=True)
class FiniteCoarseMap:
    """A map given by its table on a finite window of integers."""

    lo: int
    hi: int
    table: dict[int, int]

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty window [{self.lo}, {self.hi}]")
        missing = [x for x in range(self.lo, self.hi + 1) if x not in self.table]
        if missing:
            raise ValueError(f"table is not total on the window; missing {missing[:5]}")

    @classmethod
    def from_callable(cls, f: Callable[[int], int], lo: int, hi: int) -> "FiniteCoarseMap":
        return cls(lo=lo, hi=hi, table={x: f(x) for x in range(lo, hi + 1)})

    def domain(self) -> range:
        return range(self.lo, self.hi + 1)

    def __call__(self, x: int) -> int:
        return self.table[x]


def _greedy_table(table: dict[int, int], cover: PartitionCover) -> dict[int, int]:
    by_block: dict[int, list[int]] = {}
    for x in sorted(table):
        by_block.setdefault(cover.block_of(table[x]), []).append(x)
    out: dict[int, int] = {}
    for n in sorted(by_block):
        claimants = by_block[n]
        free = list(cover.blocks.get(n, ()))
        if len(claimants) > len(free):
            raise WindowTooSmallError(n, len(claimants), len(free))
        for x in claimants:
            target = table[x]
            i = bisect.bisect_left(free, target)
            if i == 0:
                pick = 0
            elif i == len(free):
                pick = len(free) - 1
            else:
                pick = i - 1 if target - free[i - 1] <= free[i] - target else i
            out[x] = free.pop(pick)
    return out


def greedy_injection(f: FiniteCoarseMap, cover: PartitionCover) -> dict[int, int]:
    """An injective reassignment of f into the blocks of its targets.

    Every x is sent to a free slot of the block containing f(x), so the
    result stays within one block diameter of f.  Blocks are processed
    in ascending index and elements in ascending value; each element
    takes the free slot numerically nearest to f(x), ties toward the
    smaller slot.  Any injective choice inside the block is equally
    valid for closeness; this rule is deterministic and keeps the
    assignment from wandering further than it must.  Raises
    WindowTooSmallError when a block has more claimants than window
    slots.
    """
    return _greedy_table(dict(f.table), cover)


def csb_bijection(
    a: tuple[int, ...],
    b: tuple[int, ...],
    fwd: dict[int, int],
    bwd: dict[int, int],
) -> dict[int, int]:
    """Merge two partial injections into a bijection h: a -> b.

    h agrees pointwise with fwd or with the inverse of bwd.  The union
    of the two maps decomposes into alternating chains and cycles
    (every node has in- and out-degree at most 1); chains entered on
    the a side resolve by fwd, chains entered on the b side by the
    inverse of bwd, cycles by fwd.  A chain that starts and ends on
    the same side admits no such bijection and raises
    ChainImbalanceError; unequal sizes raise ValueError.
    """
    set_a, set_b = set(a), set(b)
    if len(set_a) != len(a) or len(set_b) != len(b):
        raise ValueError("duplicate elements in a side")
    if len(a) != len(b):
        raise ValueError(f"sides have different sizes: {len(a)} vs {len(b)}")
    for name, table, dom, cod in (("fwd", fwd, set_a, set_b), ("bwd", bwd, set_b, set_a)):
        if not set(table).issubset(dom):
            raise ValueError(f"{name} has keys outside its domain")
        if not set(table.values()).issubset(cod):
            raise ValueError(f"{name} has values outside its codomain")
        if len(set(table.values())) != len(table):
            raise ValueError(f"{name} is not injective")
    fwd_inv = {v: k for k, v in fwd.items()}
    bwd_inv = {v: k for k, v in bwd.items()}

    h: dict[int, int] = {}
    visited_a: set[int] = set()
    visited_b: set[int] = set()

    def walk_from_a(x0: int) -> None:
        # chain entered at an a node: every a node on it keeps its fwd edge;
        # the chain must therefore end at a b node
        x = x0
        while True:
            visited_a.add(x)
            if x not in fwd:
                raise ChainImbalanceError(
                    f"chain entered at {x0} on the a side ends at {x} on the"
                    " a side; enlarge the window"
                )
            y = fwd[x]
            visited_b.add(y)
            h[x] = y
            if y not in bwd:
                return
            x = bwd[y]

    def walk_from_b(y0: int) -> None:
        # chain entered at a b node: every a node on it takes the bwd edge
        # pointing at it; the chain must end at an a node
        y = y0
        while True:
            visited_b.add(y)
            if y not in bwd:
                raise ChainImbalanceError(
                    f"chain entered at {y0} on the b side ends at {y} on the"
                    " b side; enlarge the window"
                )
            x = bwd[y]
            visited_a.add(x)
            h[x] = y
            if x not in fwd:
                return
            y = fwd[x]

    for x in a:
        if x not in visited_a and x not in bwd_inv:
            walk_from_a(x)
    for y in b:
        if y not in visited_b and y not in fwd_inv:
            walk_from_b(y)
    # everything untouched lies on cycles, where fwd is defined throughout
    for x in a:
        if x not in visited_a:
            cur = x
            while cur not in h:
                y = fwd[cur]
                h[cur] = y
                visited_a.add(cur)
                visited_b.add(y)
                cur = bwd[y]
    assert len(h) == len(a) and set(h.values()) == set_b, "h is not a bijection"
    for x, y in h.items():
        assert y == fwd.get(x) or x == bwd.get(y), "h escaped the two-choice rule"
    return h


def closeness_audit(h: dict[int, int], f: FiniteCoarseMap, g: int) -> int:
    """Exhaustive max base-g distance between h and f over f's window."""
    check_base(g)
    return max(distance(g, h[x], f(x)) for x in f.domain())


@dataclass(frozen=True)
class RectifyResult:
    """Outcome of the full bijective-replacement pipeline on one window."""

    base: int
    lo: int
    hi: int
    bijection: dict[int, int]
    audit: int
    fwd_pad: int
    bwd_pad: int
    fwd_kept: int
    bwd_kept: int
    attempts: int


def _padded_table_greedy(
    g: int,
    table: dict[int, int],
    anchor_lo: int,
    anchor_hi: int,
    pad: int,
) -> dict[int, int]:
    targets = table.values()
    lo = min(anchor_lo, min(targets)) - pad
    hi = max(anchor_hi, max(targets)) + pad
    cover = build_partition(g, lo, hi)
    return _greedy_table(table, cover)


def bijective_representative(
    g: int,
    lo: int,
    hi: int,
    f: Callable[[int], int],
    f_inv: Callable[[int], int],
    max_doublings: int = 8,
) -> RectifyResult:
    """A verified bijection from the window [lo, hi] onto representatives of f.

    The forward map is rectified by greedy block assignment over a
    padded cover, giving a total injection on the window whose values
    each sit within one block of the true target; its image is the
    codomain.  The window is not mapped onto itself: under an expanding
    map the top of any finite window lands in blocks whose members all
    lie outside that window again, so a self-window bijection close to
    f need not exist at all.  The coarse inverse f_inv is rectified the
    same way over the codomain, clipped back to the window, and the two
    injections are merged and cross-checked by the chain walk.  Padding
    starts at the window span and doubles whenever a block runs out of
    room; after max_doublings failures in one direction the error
    propagates.  audit is the exhaustive max distance from f.
    """
    check_base(g)
    if lo > hi:
        raise ValueError(f"empty window [{lo}, {hi}]")
    window = tuple(range(lo, hi + 1))
    fmap = FiniteCoarseMap.from_callable(f, lo, hi)
    span = max(hi - lo, 1)

    fwd_pad = span
    attempts = 0
    while True:
        attempts += 1
        try:
            fwd = _padded_table_greedy(g, dict(fmap.table), lo, hi, fwd_pad)
            break
        except WindowTooSmallError:
            if attempts >= max_doublings:
                raise
            fwd_pad *= 2

    codomain = tuple(sorted(fwd.values()))
    bwd_table = {y: f_inv(y) for y in codomain}
    bwd_pad = span
    bwd_attempts = 0
    while True:
        bwd_attempts += 1
        try:
            bwd_full = _padded_table_greedy(g, bwd_table, lo, hi, bwd_pad)
            break
        except WindowTooSmallError:
            if bwd_attempts >= max_doublings:
                raise
            bwd_pad *= 2

    bwd = {y: x for y, x in bwd_full.items() if lo <= x <= hi}
    h = csb_bijection(window, codomain, fwd, bwd)
    return RectifyResult(
        base=g,
        lo=lo,
        hi=hi,
        bijection=h,
        audit=closeness_audit(h, fmap, g),
        fwd_pad=fwd_pad,
        bwd_pad=bwd_pad,
        fwd_kept=len(fwd),
        bwd_kept=len(bwd),
        attempts=attempts + bwd_attempts,
    )
