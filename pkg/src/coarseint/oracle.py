"""Search-based ground truth for word lengths.

The digit formula in `digits` is fast but theory-laden.  This module
recomputes lengths by plain breadth-first search over sums of signed
generators, so the two routes can be compared on ranges of inputs.  It
also enumerates every valid digit vector directly, which gives an
independent uniqueness check for the balanced representation.

The search is iterative deepening on the number of terms t, with a
meet-in-the-middle test per depth: k is a sum of at most t generators
iff it splits as u + (k - u) where u uses at most floor(t/2) terms and
the remainder at most ceil(t/2).  Both halves live in a ball around 0
that is grown lazily and shared across queries.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterator

from .digits import check_base, word_length
from .primes import check_prime, smooth_numbers

__all__ = [
    "GeneratorSet",
    "OracleResult",
    "FormulaValidation",
    "SharedBall",
    "oracle_length",
    "validate_formula",
    "valid_digit_vectors",
]


@dataclass(frozen=True)
class GeneratorSet:
    """A symmetric generating set given by its positive members.

    kind "geometric": all powers of `base`.  kind "q_star": all
    integers >= 1 whose prime factors lie in `primes`, up to `cap`.
    kind "explicit": exactly `values`.  Search always uses both signs.
    """

    kind: str
    base: int | None = None
    values: tuple[int, ...] = ()
    primes: tuple[int, ...] = ()
    cap: int | None = None

    @classmethod
    def geometric(cls, g: int, cap: int | None = None) -> "GeneratorSet":
        check_base(g)
        return cls(kind="geometric", base=g, cap=cap)

    @classmethod
    def explicit(cls, values: tuple[int, ...]) -> "GeneratorSet":
        if not values or any(v < 1 for v in values):
            raise ValueError(f"explicit generators must be positive, got {values}")
        return cls(kind="explicit", values=tuple(sorted(set(values))))

    @classmethod
    def q_star(cls, primes: tuple[int, ...], cap: int) -> "GeneratorSet":
        for p in primes:
            check_prime(p)
        if cap < 1:
            raise ValueError(f"cap must be >= 1, got {cap}")
        return cls(kind="q_star", primes=tuple(sorted(set(primes))), cap=cap)

    def members(self, k: int) -> tuple[int, ...]:
        """Positive generators available when representing k, ascending."""
        if self.kind == "explicit":
            return self.values
        if self.kind == "q_star":
            assert self.cap is not None
            return tuple(smooth_numbers(self.primes, self.cap))
        assert self.kind == "geometric" and self.base is not None
        g = self.base
        cap = self.cap if self.cap is not None else default_cap(g, k)
        needed = g ** (_digit_positions(g, k) + 1)
        if cap < needed:
            warnings.warn(
                f"generator cap {cap} is below {needed}; minimal"
                f" representations of {k} may be missed",
                stacklevel=2,
            )
        out = []
        p = 1
        while p <= cap:
            out.append(p)
            p *= g
        return tuple(out)


def _digit_positions(g: int, k: int) -> int:
    """Smallest D with g**D > |k|; the number of base-g digit positions."""
    d = 0
    p = 1
    while p <= abs(k):
        p *= g
        d += 1
    return d


def default_cap(g: int, k: int) -> int:
    """Largest generator magnitude the search considers for input k.

    Two powers above the leading digit position, so that search can use
    one overshoot power and still cancel it.
    """
    return g ** (_digit_positions(g, k) + 2)


class SharedBall:
    """Lazily grown ball around 0 in the word metric of a generator list.

    dist[v] is exact for every v whose length is at most the grown
    radius; levels[r] lists the values at distance exactly r.  Parent
    pointers reconstruct a witness path back to 0.
    """

    def __init__(self, members: tuple[int, ...]):
        if not members:
            raise ValueError("generator list is empty")
        self.members = members
        self.steps = tuple(s for m in members for s in (m, -m))
        self.dist: dict[int, int] = {0: 0}
        self.parent: dict[int, tuple[int, int]] = {}
        self.levels: list[list[int]] = [[0]]
        self.radius = 0

    def grow_to(self, r: int) -> None:
        while self.radius < r:
            nxt: list[int] = []
            for v in self.levels[self.radius]:
                for s in self.steps:
                    w = v + s
                    if w not in self.dist:
                        self.dist[w] = self.radius + 1
                        self.parent[w] = (v, s)
                        nxt.append(w)
            self.levels.append(nxt)
            self.radius += 1

    def path(self, v: int) -> list[int]:
        """Signed generator terms summing to v, shortest known."""
        terms: list[int] = []
        while v != 0:
            v, s = self.parent[v]
            terms.append(s)
        return terms

    def split_at(self, k: int, t: int) -> tuple[int, int] | None:
        """Find u with dist[u] + dist[k - u] <= t, or None.

        Complete for the true length: any witness with t terms splits
        into halves of floor(t/2) and ceil(t/2) terms, both inside the
        ball of radius ceil(t/2).
        """
        self.grow_to((t + 1) // 2)
        gmax = self.members[-1]
        dist = self.dist
        for r in range(t // 2 + 1):
            budget = t - r
            reach = budget * gmax
            for u in self.levels[r]:
                w = k - u
                if w > reach or w < -reach:
                    continue
                dw = dist.get(w)
                if dw is not None and dw <= budget:
                    return u, w
        return None


@dataclass(frozen=True)
class OracleResult:
    """Outcome of a bounded search for the word length of k.

    length is None when every depth up to search_bound failed; that is
    inconclusive, not a proof that k needs more terms.
    """

    k: int
    length: int | None
    witness: tuple[int, ...]
    generators_used: tuple[int, ...]
    search_bound: int

    @property
    def conclusive(self) -> bool:
        return self.length is not None


def oracle_length(
    gen: GeneratorSet,
    k: int,
    max_terms: int | None = None,
    ball: SharedBall | None = None,
) -> OracleResult:
    """Exact word length of k by iterative deepening, up to max_terms.

    For geometric sets max_terms defaults to the digit-formula value,
    which always admits a witness, so the result is conclusive and the
    comparison against the formula is meaningful.  Other kinds have no
    formula to lean on and must pass max_terms explicitly.
    """
    if max_terms is None:
        if gen.kind != "geometric":
            raise ValueError(f"max_terms is required for kind {gen.kind!r}")
        assert gen.base is not None
        max_terms = word_length(gen.base, k)
    if max_terms < 0:
        raise ValueError(f"max_terms must be >= 0, got {max_terms}")
    members = gen.members(k)
    if ball is None:
        ball = SharedBall(members)
    elif ball.members != members:
        raise ValueError("shared ball was built for a different generator list")
    if k == 0:
        return OracleResult(k, 0, (), members, max_terms)
    for t in range(1, max_terms + 1):
        found = ball.split_at(k, t)
        if found is not None:
            u, w = found
            terms = ball.path(u) + ball.path(w)
            assert sum(terms) == k and len(terms) == t
            return OracleResult(k, t, tuple(sorted(terms, key=abs, reverse=True)),
                                members, max_terms)
    return OracleResult(k, None, (), members, max_terms)


@dataclass(frozen=True)
class FormulaValidation:
    """Range comparison of digit-formula lengths against search lengths."""

    base: int
    lo: int
    hi: int
    checked: int
    mismatches: tuple[tuple[int, int, int], ...]  # (k, formula, search)
    inconclusive: tuple[int, ...]
    max_length: int
    ball_size: int
    generator_cap: int

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.inconclusive


def validate_formula(g: int, lo: int, hi: int) -> FormulaValidation:
    """Compare word_length(g, k) with the search oracle for every k in [lo, hi].

    One ball is shared across the whole range.  Each k is deepened to
    its formula value; finding a shorter witness or exhausting the
    budget without one are both recorded (the latter cannot happen for
    a correctly capped geometric set, but is reported rather than
    assumed away).
    """
    check_base(g)
    if lo > hi:
        raise ValueError(f"empty range [{lo}, {hi}]")
    k_extreme = max(abs(lo), abs(hi))
    gen = GeneratorSet.geometric(g, cap=default_cap(g, k_extreme))
    members = gen.members(k_extreme)
    ball = SharedBall(members)
    mismatches: list[tuple[int, int, int]] = []
    inconclusive: list[int] = []
    max_len = 0
    for k in range(lo, hi + 1):
        expect = word_length(g, k)
        max_len = max(max_len, expect)
        res = oracle_length(gen, k, max_terms=expect, ball=ball)
        if res.length is None:
            inconclusive.append(k)
        elif res.length != expect:
            mismatches.append((k, expect, res.length))
    return FormulaValidation(
        base=g,
        lo=lo,
        hi=hi,
        checked=hi - lo + 1,
        mismatches=tuple(mismatches),
        inconclusive=tuple(inconclusive),
        max_length=max_len,
        ball_size=len(ball.dist),
        generator_cap=members[-1],
    )


def valid_digit_vectors(g: int, positions: int) -> Iterator[tuple[int, ...]]:
    """Yield every canonical digit tuple of length <= positions.

    Canonical means the digit rules hold and the highest stored digit
    is nonzero; the empty tuple (zero) is yielded first.  Used to check
    uniqueness: no two distinct tuples may denote the same integer.
    """
    check_base(g)
    if positions < 0:
        raise ValueError(f"positions must be >= 0, got {positions}")
    half = g // 2
    choices = range(-half, half + 1)
    even = g % 2 == 0

    def extend(prefix: list[int]) -> Iterator[tuple[int, ...]]:
        if prefix and prefix[-1] != 0:
            yield tuple(prefix)
        if len(prefix) == positions:
            return
        prev = prefix[-1] if prefix else None
        for d in choices:
            if even and prev is not None and abs(prev) == half:
                if abs(d) == half or prev * d < 0:
                    continue
            prefix.append(d)
            yield from extend(prefix)
            prefix.pop()

    yield ()
    yield from extend([])
