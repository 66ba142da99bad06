"""Finite-precision residue arithmetic for base-g limits.

A sequence of integers can converge in the g-adic sense (residues
mod g**N eventually constant for every N) while its word lengths blow
up.  This module gives the small toolkit needed to exhibit that:
residues at a chosen precision, inverses mod g**N, digit prefixes read
off a residue, explicit divergence witnesses, and a stabilization
report for an arbitrary integer sequence.

Precision semantics: a ResidueApprox with precision N stands for the
full congruence class mod g**N.  Binary operations return the smaller
of the two precisions, since nothing finer is warranted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .digits import balanced_rep, check_base, word_length
from .primes import check_prime

__all__ = [
    "ResidueApprox",
    "DivergenceWitness",
    "StabilizationReport",
    "approx_from_int",
    "digit_prefix",
    "divergence_witness",
    "mod_inverse_approx",
    "stabilization_check",
]


@dataclass(frozen=True)
class ResidueApprox:
    """A congruence class mod base**precision, stored as its least residue."""

    base: int
    precision: int
    residue: int

    def __post_init__(self) -> None:
        check_base(self.base)
        if self.precision < 1:
            raise ValueError(f"precision must be >= 1, got {self.precision}")
        if not 0 <= self.residue < self.modulus:
            raise ValueError(
                f"residue {self.residue} out of range for modulus {self.modulus}"
            )

    @property
    def modulus(self) -> int:
        return self.base**self.precision

    def reduce(self, precision: int) -> "ResidueApprox":
        """Forget digits: the same class at a coarser precision."""
        if not 1 <= precision <= self.precision:
            raise ValueError(
                f"can reduce precision {self.precision} to [1, {self.precision}],"
                f" got {precision}"
            )
        return ResidueApprox(self.base, precision, self.residue % self.base**precision)

    def contains(self, k: int) -> bool:
        """Whether the integer k lies in this congruence class."""
        return k % self.modulus == self.residue

    def _align(self, other: "ResidueApprox") -> int:
        if not isinstance(other, ResidueApprox):
            raise TypeError(f"expected ResidueApprox, got {type(other).__name__}")
        if other.base != self.base:
            raise ValueError(f"mixed bases {self.base} and {other.base}")
        return min(self.precision, other.precision)

    def __add__(self, other: "ResidueApprox") -> "ResidueApprox":
        n = self._align(other)
        m = self.base**n
        return ResidueApprox(self.base, n, (self.residue + other.residue) % m)

    def __sub__(self, other: "ResidueApprox") -> "ResidueApprox":
        n = self._align(other)
        m = self.base**n
        return ResidueApprox(self.base, n, (self.residue - other.residue) % m)

    def __mul__(self, other: "ResidueApprox") -> "ResidueApprox":
        n = self._align(other)
        m = self.base**n
        return ResidueApprox(self.base, n, (self.residue * other.residue) % m)

    def __neg__(self) -> "ResidueApprox":
        return ResidueApprox(self.base, self.precision, (-self.residue) % self.modulus)


def approx_from_int(g: int, k: int, precision: int) -> ResidueApprox:
    """The class of k mod g**precision."""
    check_base(g)
    if precision < 1:
        raise ValueError(f"precision must be >= 1, got {precision}")
    return ResidueApprox(g, precision, k % g**precision)


def mod_inverse_approx(g: int, a: int, precision: int) -> ResidueApprox:
    """The class of a**-1 mod g**precision; a must be coprime to g."""
    check_base(g)
    if precision < 1:
        raise ValueError(f"precision must be >= 1, got {precision}")
    if math.gcd(a, g) != 1:
        raise ValueError(f"{a} is not invertible mod powers of {g}")
    return ResidueApprox(g, precision, pow(a, -1, g**precision))


def digit_prefix(approx: ResidueApprox) -> tuple[int, ...]:
    """Balanced digits 0..precision-2 shared by every integer in the class.

    Congruence mod g**N pins down the balanced digits only up to
    position N - 2 (the top two positions feel the unknown higher
    part), so precision must be at least 2 and the result has length
    precision - 1, trailing zeros kept.
    """
    if approx.precision < 2:
        raise ValueError("digit prefix needs precision >= 2")
    rep = balanced_rep(approx.base, approx.residue)
    count = approx.precision - 1
    return tuple(rep.digit(i) for i in range(count))


@dataclass(frozen=True)
class DivergenceWitness:
    """A g-adically convergent sequence whose word lengths diverge.

    terms[i] = (g**((p-1)*(i+1)) - 1) / p for a prime p not dividing g.
    Multiplying by p sends every term next to a power of g, so the
    image lengths stay at most 2 while the lengths themselves grow.
    """

    base: int
    prime: int
    terms: tuple[int, ...]
    lengths: tuple[int, ...]
    image_lengths: tuple[int, ...]

    @property
    def max_length(self) -> int:
        return max(self.lengths)


def divergence_witness(g: int, p: int, i_max: int) -> DivergenceWitness:
    """Build the witness sequence for base g and prime p, i = 1..i_max."""
    check_base(g)
    check_prime(p)
    if g % p == 0:
        raise ValueError(
            f"{p} divides {g}; witness sequences exist only for non-divisors"
        )
    if i_max < 1:
        raise ValueError(f"i_max must be >= 1, got {i_max}")
    terms = []
    lengths = []
    image_lengths = []
    for i in range(1, i_max + 1):
        power = g ** ((p - 1) * i)
        # Fermat: p divides g**(p-1) - 1, hence every g**((p-1)i) - 1
        if (power - 1) % p != 0:
            raise AssertionError(f"{p} does not divide {power} - 1")
        x = (power - 1) // p
        terms.append(x)
        lengths.append(word_length(g, x))
        image_lengths.append(word_length(g, p * x))
    return DivergenceWitness(g, p, tuple(terms), tuple(lengths), tuple(image_lengths))


@dataclass(frozen=True)
class StabilizationReport:
    """Residues of a sequence at one precision, and whether they settle.

    stable_from is the first index after which the residue never
    changes, or None when the last two residues still differ.
    candidate_value is the integer spelled by the stabilized digit
    prefix: the only integer with that prefix and no digits beyond it.
    integer_candidate says whether that integer stays within the
    magnitude of the sequence itself.  The approximating terms lie in
    the settled class, so this flag holds whenever the tail settles;
    the discriminating evidence is candidate_value, which grows with
    precision exactly when the underlying limit is not an integer.
    """

    base: int
    precision: int
    residues: tuple[int, ...]
    lengths: tuple[int, ...]
    stable_from: int | None
    limit_digits: tuple[int, ...] | None
    candidate_value: int | None
    integer_candidate: bool | None

    @property
    def stabilized(self) -> bool:
        return self.stable_from is not None


def stabilization_check(g: int, xs: tuple[int, ...], precision: int) -> StabilizationReport:
    """Reduce a sequence mod g**precision and report how it settles."""
    check_base(g)
    if not xs:
        raise ValueError("sequence is empty")
    if precision < 2:
        raise ValueError(f"precision must be >= 2, got {precision}")
    modulus = g**precision
    residues = tuple(x % modulus for x in xs)
    lengths = tuple(word_length(g, x) for x in xs)
    last = residues[-1]
    j = len(residues) - 1
    while j > 0 and residues[j - 1] == last:
        j -= 1
    # a constant tail of length 1 is no evidence of settling
    stable_from = j if j <= len(residues) - 2 else None
    limit_digits = None
    candidate_value = None
    integer_candidate = None
    if stable_from is not None:
        limit_digits = digit_prefix(ResidueApprox(g, precision, last))
        candidate_value = sum(d * g**i for i, d in enumerate(limit_digits))
        bound = max(abs(x) for x in xs)
        integer_candidate = abs(candidate_value) <= bound
    return StabilizationReport(
        base=g,
        precision=precision,
        residues=residues,
        lengths=lengths,
        stable_from=stable_from,
        limit_digits=limit_digits,
        candidate_value=candidate_value,
        integer_candidate=integer_candidate,
    )
