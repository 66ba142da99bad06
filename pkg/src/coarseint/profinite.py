"""Residue arithmetic and invertibility experiments for prime-set metrics.

Fix a finite nonempty set Q of primes and let Q* be the positive
integers whose prime factors all lie in Q.  Congruence mod members of
Q* defines a metric-like structure on the integers in which a set is
bounded when its residues stabilize; completing along the modulus
tower m_n = (prod Q)**n gives, via the Chinese remainder theorem, one
p-adic component per prime in Q.

Multiplication by p is coarsely invertible here exactly when p is in
Q.  For p in Q the inverse is floor division, whose continuity is an
exact divisibility statement checked on samples.  For p outside Q the
obstruction is properness: the bounded set K = {p * a_n} | {1}, with
a_n the inverse of p mod m_n, pulls back to the unbounded, never
settling sequence a_n.  All verdicts carry the finite evidence that
was actually computed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .primes import check_prime, prime_factors, smooth_numbers
from .spectra import (
    ComparisonResult,
    PrimeVerdict,
    Verdict,
    compare_verdicts,
)

__all__ = [
    "PrimeSet",
    "QadicApprox",
    "QStarModulus",
    "NonproperWitness",
    "ContinuityEvidence",
    "QInvertibilityEvidence",
    "QClassifyParams",
    "QSpectrumReport",
    "crt_combine",
    "q_star_members",
    "qadic_from_int",
    "qadic_inverse_sequence",
    "nonproper_witness",
    "floor_div_continuity_check",
    "covering_spot_check",
    "spectrum_profinite",
    "compare_profinite",
]


@dataclass(frozen=True)
class PrimeSet:
    """A finite nonempty set of distinct primes, kept sorted."""

    primes: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.primes:
            raise ValueError("prime set is empty")
        if tuple(sorted(set(self.primes))) != self.primes:
            raise ValueError(f"primes must be sorted and distinct, got {self.primes}")
        for p in self.primes:
            check_prime(p)

    @classmethod
    def of(cls, *primes: int) -> "PrimeSet":
        return cls(tuple(sorted(set(primes))))

    @property
    def product(self) -> int:
        out = 1
        for p in self.primes:
            out *= p
        return out

    def __contains__(self, p: int) -> bool:
        return p in self.primes

    def label(self) -> str:
        return "Q={" + ",".join(str(p) for p in self.primes) + "}"

    def tower_modulus(self, n: int) -> int:
        """m_n = (prod Q)**n, the uniform-exponent modulus tower."""
        if n < 1:
            raise ValueError(f"tower index must be >= 1, got {n}")
        return self.product**n


@dataclass(frozen=True)
class QStarModulus:
    """A positive integer all of whose prime factors lie in Q."""

    value: int
    factorization: tuple[tuple[int, int], ...]  # (prime, multiplicity)


def q_star_members(q: PrimeSet, bound: int) -> list[QStarModulus]:
    """All Q-factored moduli up to bound, ascending; 1 is always first."""
    if bound < 1:
        raise ValueError(f"bound must be >= 1, got {bound}")
    out = []
    for m in smooth_numbers(q.primes, bound):
        fac = tuple(sorted(prime_factors(m).items())) if m > 1 else ()
        out.append(QStarModulus(value=m, factorization=fac))
    return out


@dataclass(frozen=True)
class QadicApprox:
    """Finite-precision residue data, one component per prime of Q.

    residues[i] is a class mod primes[i]**exponents[i]; the CRT value
    is the unique class mod the product.  Reducing exponents must agree
    with constructing at the lower exponents directly, which is the
    compatibility making the components a single object.
    """

    primes: PrimeSet
    exponents: tuple[int, ...]
    residues: tuple[int, ...]

    def __post_init__(self) -> None:
        ps = self.primes.primes
        if not (len(ps) == len(self.exponents) == len(self.residues)):
            raise ValueError("primes, exponents and residues must align")
        for p, e, r in zip(ps, self.exponents, self.residues):
            if e < 1:
                raise ValueError(f"exponent for {p} must be >= 1, got {e}")
            if not 0 <= r < p**e:
                raise ValueError(f"residue {r} out of range for {p}**{e}")

    @property
    def modulus(self) -> int:
        out = 1
        for p, e in zip(self.primes.primes, self.exponents):
            out *= p**e
        return out

    def reduce(self, exponents: tuple[int, ...]) -> "QadicApprox":
        if len(exponents) != len(self.exponents):
            raise ValueError("exponent tuple has wrong length")
        for e_new, e_old in zip(exponents, self.exponents):
            if not 1 <= e_new <= e_old:
                raise ValueError(
                    f"can only reduce exponents, got {exponents} from {self.exponents}"
                )
        residues = tuple(
            r % p**e
            for p, e, r in zip(self.primes.primes, exponents, self.residues)
        )
        return QadicApprox(self.primes, exponents, residues)

    def crt_value(self) -> int:
        """Least nonnegative integer matching every component."""
        pairs = [
            (r, p**e)
            for p, e, r in zip(self.primes.primes, self.exponents, self.residues)
        ]
        return crt_combine(pairs)


def crt_combine(pairs: list[tuple[int, int]]) -> int:
    """Solve x = r (mod m) for pairwise coprime moduli; least nonnegative x.

    Args:
        pairs: (residue, modulus) pairs with pairwise coprime moduli.
    """
    if not pairs:
        raise ValueError("no congruences given")
    x, m = 0, 1
    for r, mod in pairs:
        if mod < 1:
            raise ValueError(f"modulus must be >= 1, got {mod}")
        # solve x + m*t = r (mod mod)
        t = ((r - x) * pow(m, -1, mod)) % mod
        x += m * t
        m *= mod
    return x % m


def qadic_from_int(q: PrimeSet, exponents: tuple[int, ...], k: int) -> QadicApprox:
    """Componentwise reduction of the integer k."""
    if len(exponents) != len(q.primes):
        raise ValueError("one exponent per prime is required")
    residues = tuple(k % p**e for p, e in zip(q.primes, exponents))
    return QadicApprox(q, exponents, residues)


def qadic_inverse_sequence(q: PrimeSet, p: int, n_max: int) -> list[int]:
    """a_n = least nonnegative inverse of p mod m_n, for n = 1..n_max.

    Consecutive terms satisfy a_{n+1} = a_n (mod m_n), so the sequence
    is Cauchy in the pro-Q sense; it is the standard preimage sequence
    for the properness experiments.  p must lie outside Q.
    """
    check_prime(p)
    if p in q:
        raise ValueError(f"{p} is in {q.label()}; no inverse exists mod the tower")
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    return [pow(p, -1, q.tower_modulus(n)) for n in range(1, n_max + 1)]


@dataclass(frozen=True)
class NonproperWitness:
    """Desk-scale evidence that multiplication by p is not proper.

    The image terms p * a_n converge to 1 (checked residue by residue),
    so K = {p * a_n} | {1} is bounded; the preimage terms a_n are
    Cauchy yet keep changing and grow past every modulus checked.  The
    magnitude bound recorded is how far "unbounded" was actually
    tested; nothing beyond it is claimed.
    """

    primes: PrimeSet
    prime: int
    n_max: int
    a_terms: tuple[int, ...]
    image_terms: tuple[int, ...]
    cauchy_ok: bool
    image_converges_to_one: bool
    last_change_index: int | None
    distinct_terms: int
    max_abs: int
    magnitude_bound_checked: int


def nonproper_witness(q: PrimeSet, p: int, n_max: int) -> NonproperWitness:
    """Build and check the witness data for p outside Q."""
    a = qadic_inverse_sequence(q, p, n_max)
    moduli = [q.tower_modulus(n) for n in range(1, n_max + 1)]
    cauchy_ok = all(
        (a[n + 1] - a[n]) % moduli[n] == 0 for n in range(n_max - 1)
    )
    image_converges = all(
        (p * a[j] - 1) % moduli[n] == 0
        for n in range(n_max)
        for j in range(n, n_max)
    )
    last_change = None
    for n in range(n_max - 1):
        if a[n + 1] != a[n]:
            last_change = n + 1
    return NonproperWitness(
        primes=q,
        prime=p,
        n_max=n_max,
        a_terms=tuple(a),
        image_terms=tuple(p * x for x in a),
        cauchy_ok=cauchy_ok,
        image_converges_to_one=image_converges,
        last_change_index=last_change,
        distinct_terms=len(set(a)),
        max_abs=max(abs(x) for x in a),
        magnitude_bound_checked=moduli[-1],
    )


@dataclass(frozen=True)
class ContinuityEvidence:
    """Sampled exact-divisibility checks for floor division by p in Q.

    For x = y (mod p**(n+1) * m) with m a Q-modulus coprime to p, the
    difference of floors is (x - y) / p, hence divisible by p**n * m.
    """

    primes: PrimeSet
    prime: int
    pairs_checked: int
    max_exponent: int
    moduli_used: tuple[int, ...]


@dataclass(frozen=True)
class QInvertibilityEvidence:
    """Continuity evidence plus the covering spot check for p in Q.

    The covering check verifies that floors of k + K stay inside the
    floors of K shifted by floor(k/p) or one more, which is the finite
    heart of why floor division is a coarse inverse here.
    """

    continuity: ContinuityEvidence
    covering_sets_checked: int
    covering_elements_checked: int


def floor_div_continuity_check(
    q: PrimeSet,
    p: int,
    pairs: int = 10_000,
    max_exponent: int = 8,
    magnitude: int = 10**6,
    seed: int = 0,
) -> ContinuityEvidence:
    """Sample congruent pairs and assert the floor-difference divisibility.

    Any violation raises AssertionError with the pair; the relation is
    an identity, so a failure means the arithmetic is broken.
    """
    if p not in q:
        raise ValueError(f"{p} is not in {q.label()}")
    if pairs < 1 or max_exponent < 1:
        raise ValueError("pairs and max_exponent must be >= 1")
    rng = random.Random(seed)
    coprime_pool = [
        m for m in smooth_numbers(q.primes, 10_000) if m % p != 0
    ]
    moduli_used = set()
    for _ in range(pairs):
        n = rng.randint(0, max_exponent)
        m = rng.choice(coprime_pool)
        step = p ** (n + 1) * m
        x = rng.randint(-magnitude, magnitude)
        y = x + rng.randint(-4, 4) * step
        diff = x // p - y // p
        if diff % (p**n * m) != 0:
            raise AssertionError(
                f"floor difference {diff} for pair ({x}, {y}) is not"
                f" divisible by {p}**{n} * {m}"
            )
        moduli_used.add(step)
    return ContinuityEvidence(
        primes=q,
        prime=p,
        pairs_checked=pairs,
        max_exponent=max_exponent,
        moduli_used=tuple(sorted(moduli_used)),
    )


def covering_spot_check(
    p: int,
    sets: int = 50,
    set_size: int = 8,
    magnitude: int = 10**6,
    seed: int = 0,
) -> tuple[int, int]:
    """Verify floor((k + K)/p) sits inside floor(k/p) + (floor(K/p) | +1).

    Returns (sets_checked, elements_checked); raises AssertionError on
    a violation, which the carry argument says cannot happen.
    """
    check_prime(p)
    rng = random.Random(seed)
    elements = 0
    for _ in range(sets):
        ks = [rng.randint(-magnitude, magnitude) for _ in range(set_size)]
        k = rng.randint(-magnitude, magnitude)
        base = k // p
        allowed_shifts = {x // p for x in ks} | {x // p + 1 for x in ks}
        for x in ks:
            got = (k + x) // p
            elements += 1
            if got - base not in allowed_shifts:
                raise AssertionError(
                    f"floor(({k} + {x})/{p}) = {got} escapes the covering"
                )
    return sets, elements


@dataclass(frozen=True)
class QClassifyParams:
    n_max: int = 30
    magnitude_threshold: int = 2**20
    continuity_pairs: int = 10_000
    covering_sets: int = 50
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_max < 2:
            raise ValueError(f"n_max must be >= 2, got {self.n_max}")
        if self.magnitude_threshold < 1:
            raise ValueError("magnitude_threshold must be >= 1")


@dataclass(frozen=True)
class QSpectrumReport:
    """Per-prime verdicts for one prime-set space, plus closure sets."""

    primes_set: PrimeSet
    primes: tuple[int, ...]
    verdicts: tuple[PrimeVerdict, ...]
    invertible_primes: tuple[int, ...]
    closure_bound: int
    nat_members: tuple[int, ...]
    int_members: tuple[int, ...]
    rational_generators: tuple[int, ...]

    @property
    def undecided_primes(self) -> tuple[int, ...]:
        return tuple(v.prime for v in self.verdicts if v.verdict is Verdict.UNDECIDED)

    @property
    def fully_decided(self) -> bool:
        return not self.undecided_primes

    def label(self) -> str:
        return self.primes_set.label()


def classify_prime_profinite(
    q: PrimeSet, p: int, params: QClassifyParams | None = None
) -> PrimeVerdict:
    """Classify multiplication by p on the pro-Q structure.

    p in Q: INVERTIBLE with continuity plus covering evidence.  p not
    in Q: NOT_INVERTIBLE when the nonproper witness fully checks out
    and its terms outgrow the magnitude threshold, else UNDECIDED.
    """
    check_prime(p)
    if params is None:
        params = QClassifyParams()
    if p in q:
        continuity = floor_div_continuity_check(
            q, p, pairs=params.continuity_pairs, seed=params.seed
        )
        sets_n, elems = covering_spot_check(
            p, sets=params.covering_sets, seed=params.seed
        )
        ev = QInvertibilityEvidence(
            continuity=continuity,
            covering_sets_checked=sets_n,
            covering_elements_checked=elems,
        )
        return PrimeVerdict(prime=p, verdict=Verdict.INVERTIBLE, evidence=ev)
    witness = nonproper_witness(q, p, params.n_max)
    solid = (
        witness.cauchy_ok
        and witness.image_converges_to_one
        and witness.distinct_terms >= 3
        and witness.max_abs > params.magnitude_threshold
    )
    if solid:
        return PrimeVerdict(prime=p, verdict=Verdict.NOT_INVERTIBLE, evidence=witness)
    reasons = []
    if not witness.cauchy_ok:
        reasons.append("preimage sequence is not Cauchy")
    if not witness.image_converges_to_one:
        reasons.append("image terms do not converge to 1")
    if witness.distinct_terms < 3:
        reasons.append("preimage sequence barely moves")
    if witness.max_abs <= params.magnitude_threshold:
        reasons.append(
            f"max |a_n| = {witness.max_abs} did not exceed threshold"
            f" {params.magnitude_threshold}"
        )
    return PrimeVerdict(
        prime=p, verdict=Verdict.UNDECIDED, evidence=witness, reason="; ".join(reasons)
    )


def spectrum_profinite(
    q: PrimeSet,
    primes: tuple[int, ...],
    params: QClassifyParams | None = None,
    closure_bound: int = 20,
) -> QSpectrumReport:
    """Classify each listed prime against the pro-Q structure."""
    if not primes:
        raise ValueError("primes list is empty")
    if params is None:
        params = QClassifyParams()
    ordered = tuple(sorted(set(primes)))
    verdicts = tuple(classify_prime_profinite(q, p, params) for p in ordered)
    invertible = tuple(v.prime for v in verdicts if v.verdict is Verdict.INVERTIBLE)
    nat = tuple(smooth_numbers(invertible, closure_bound)) if invertible else (1,)
    int_members = tuple(sorted(set(-n for n in nat) | set(nat)))
    return QSpectrumReport(
        primes_set=q,
        primes=ordered,
        verdicts=verdicts,
        invertible_primes=invertible,
        closure_bound=closure_bound,
        nat_members=nat,
        int_members=int_members,
        rational_generators=invertible,
    )


def compare_profinite(a: QSpectrumReport, b: QSpectrumReport) -> ComparisonResult:
    """Compare two prime-set reports; see spectra.compare_verdicts."""
    return compare_verdicts(a.label(), b.label(), a.verdicts, b.verdicts)
