"""Balanced signed-digit arithmetic for power-of-g word metrics on the integers.

For a base g >= 2, take {+g**n, -g**n : n >= 0} as the generating set.
The distance between integers a and b is then the least number of signed
powers of g that sum to a - b.  Every integer k has a unique balanced
representation

    k = sum(eps[i] * g**i),   eps[i] in {0, +-1, ..., +-(g // 2)},

where for even g a digit of magnitude g/2 is never followed by another
digit of magnitude g/2 and never by a digit of the opposite sign.  The
word length of k equals sum(|eps[i]|), so the metric is computable
digit by digit instead of by search.  This module computes the digits
and the quantities built on top of them; `oracle` rechecks the length
formula against breadth-first search.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

__all__ = [
    "BalancedRep",
    "DefectResult",
    "balanced_rep",
    "check_base",
    "check_digits",
    "distance",
    "floor_div",
    "quasimorphism_defect",
    "word_length",
]


def check_base(g: int) -> int:
    """Return g unchanged if it is a valid base (>= 2), else raise."""
    if not isinstance(g, int) or isinstance(g, bool):
        raise ValueError(f"base must be an int, got {g!r}")
    if g < 2:
        raise ValueError(f"base must be >= 2, got {g}")
    return g


def check_digits(g: int, digits: tuple[int, ...]) -> None:
    """Validate a balanced digit tuple for base g; raise ValueError if invalid.

    Rules: every |digit| <= g // 2; the highest stored digit is nonzero
    (zero is the empty tuple); and for even g a digit of magnitude g/2
    is followed, if at all, by a digit of smaller magnitude and
    compatible sign.
    """
    check_base(g)
    half = g // 2
    if digits and digits[-1] == 0:
        raise ValueError("highest digit must be nonzero")
    for i, d in enumerate(digits):
        if abs(d) > half:
            raise ValueError(f"digit {d} at position {i} exceeds bound {half}")
    if g % 2 == 0:
        for i in range(len(digits) - 1):
            if abs(digits[i]) == half:
                nxt = digits[i + 1]
                if abs(nxt) == half:
                    raise ValueError(
                        f"digits of magnitude {half} at positions {i} and {i + 1}"
                    )
                if digits[i] * nxt < 0:
                    raise ValueError(
                        f"sign change after digit of magnitude {half} at position {i}"
                    )


@dataclass(frozen=True)
class BalancedRep:
    """Canonical balanced digit expansion of an integer in base g.

    digits[i] is the coefficient of g**i, least significant first.  The
    empty tuple represents zero.  Construction validates the digit
    rules, so two equal values always compare equal as representations.
    """

    base: int
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        check_digits(self.base, tuple(self.digits))

    @property
    def value(self) -> int:
        """The integer this expansion denotes."""
        total = 0
        for d in reversed(self.digits):
            total = total * self.base + d
        return total

    @property
    def weight(self) -> int:
        """Sum of digit magnitudes; equals the word length of `value`."""
        return sum(abs(d) for d in self.digits)

    def digit(self, i: int) -> int:
        """Digit at position i >= 0, zero beyond the stored length."""
        if i < 0:
            raise ValueError(f"digit position must be >= 0, got {i}")
        return self.digits[i] if i < len(self.digits) else 0


def balanced_rep(g: int, k: int) -> BalancedRep:
    """Compute the balanced representation of k in base g.

    Works least significant digit first.  At each step the digit is the
    residue of the remaining value folded into [-g/2, g/2]; when g is
    even and the residue is exactly g/2 the sign is chosen so that the
    following digit keeps a compatible sign, which is what makes the
    expansion unique.
    """
    check_base(g)
    half = g // 2
    digits: list[int] = []
    r = k
    while r != 0:
        c = r % g
        if 2 * c < g:
            eps = c
        elif 2 * c > g:
            eps = c - g
        else:
            # residue is exactly g/2: the quotient decides the sign
            q = (r - half) // g
            eps = half if q % g < half else -half
        digits.append(eps)
        r = (r - eps) // g
    return BalancedRep(g, tuple(digits))


def word_length(g: int, k: int) -> int:
    """Least number of terms +-g**n summing to k."""
    return balanced_rep(g, k).weight


def distance(g: int, a: int, b: int) -> int:
    """Word metric: distance between a and b under base-g generators."""
    return word_length(g, a - b)


def floor_div(k: int, g: int) -> int:
    """Floor division rounding toward minus infinity.

    This is the coarse inverse of multiplication by g: it never
    increases base-g distances and g * floor_div(k, g) stays within a
    bounded distance of k.
    """
    check_base(g)
    return k // g


@dataclass(frozen=True)
class DefectResult:
    """Worst additivity failure of a map over a window of integers."""

    defect: int
    witness_pair: tuple[int, int]


def quasimorphism_defect(
    f: Callable[[int], int], g: int, window: tuple[int, int]
) -> DefectResult:
    """Max over a, b of the base-g distance between f(a + b) and f(a) + f(b).

    Pairs are admissible when a, b and a + b all lie in the inclusive
    window.  Raises ValueError when the window admits no pair.
    """
    check_base(g)
    lo, hi = window
    if lo > hi:
        raise ValueError(f"empty window {window}")
    values = {x: f(x) for x in range(lo, hi + 1)}
    lengths: dict[int, int] = {}
    best = -1
    best_pair = (0, 0)
    for a in range(lo, hi + 1):
        for b in range(max(lo, lo - a), min(hi, hi - a) + 1):
            diff = values[a + b] - values[a] - values[b]
            d = lengths.get(diff)
            if d is None:
                d = word_length(g, diff)
                lengths[diff] = d
            if d > best:
                best = d
                best_pair = (a, b)
    if best < 0:
        raise ValueError(f"window {window} admits no pair (a, b) with a + b inside")
    return DefectResult(defect=best, witness_pair=best_pair)
