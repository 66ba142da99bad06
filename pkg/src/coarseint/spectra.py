"""Which multiplication maps on the integers are invertible up to bounded error.

Multiplication by n is always 1-Lipschitz for the base-g word metric
(it permutes generators up to sign and splits across digits), so the
interesting question is whether it has a coarse inverse.  For n = g the
inverse is floor division by g: a genuine contraction whose roundtrip
error is bounded by the lengths of {0..g-1}.  Invertible n are closed
under products and divisors, which pushes invertibility from g to every
prime dividing g.  For a prime p not dividing g no bounded-error
inverse exists, and the witness is a sequence whose image under
multiplication by p stays two generators wide while the sequence's own
lengths grow without bound.

Verdicts here are empirical.  INVERTIBLE is backed by a sampled
contraction certificate, NOT_INVERTIBLE by a divergence witness whose
length tail is strictly increasing and exceeds a threshold, and
anything that fails its evidence check is UNDECIDED rather than
guessed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum

from .approx import divergence_witness
from .digits import check_base, distance, word_length
from .primes import check_prime, prime_factors, smooth_numbers

__all__ = [
    "Verdict",
    "UndecidedError",
    "ContractionViolation",
    "PairSamples",
    "ContractionCertificate",
    "InvertibilityEvidence",
    "DivergenceEvidence",
    "PrimeVerdict",
    "ClassifyParams",
    "SpectrumReport",
    "ComparisonResult",
    "mu_apply",
    "contraction_certificate",
    "classify_prime",
    "spectrum",
    "compare_spectra",
    "compare_verdicts",
]


class Verdict(str, Enum):
    INVERTIBLE = "INVERTIBLE"
    NOT_INVERTIBLE = "NOT_INVERTIBLE"
    UNDECIDED = "UNDECIDED"


class UndecidedError(Exception):
    """Raised when an operation needs a decided verdict and lacks one."""


class ContractionViolation(AssertionError):
    """A sampled pair broke an inequality that should always hold."""

    def __init__(self, message: str, pair: tuple[int, int]):
        super().__init__(message)
        self.pair = pair


def mu_apply(n: int, k: int) -> int:
    """The multiplication map with exponent n, applied to k."""
    return n * k


@dataclass(frozen=True)
class PairSamples:
    """How contraction checks sample integer pairs.

    All pairs from [-exhaustive_radius, exhaustive_radius] squared,
    plus n_random seeded pairs of magnitude up to random_magnitude.
    """

    exhaustive_radius: int = 300
    n_random: int = 1000
    random_magnitude: int = 10**6
    seed: int = 0

    def __post_init__(self) -> None:
        if self.exhaustive_radius < 0 or self.n_random < 0:
            raise ValueError("sample sizes must be nonnegative")
        if self.n_random > 0 and self.random_magnitude < 1:
            raise ValueError("random_magnitude must be >= 1")

    def random_pairs(self) -> list[tuple[int, int]]:
        rng = random.Random(self.seed)
        m = self.random_magnitude
        return [
            (rng.randint(-m, m), rng.randint(-m, m)) for _ in range(self.n_random)
        ]


@dataclass(frozen=True)
class ContractionCertificate:
    """Record that floor division by `base` contracted on every sampled pair.

    Also certifies the roundtrip: base * (k // base) stayed within
    roundtrip_allowed of k, where roundtrip_allowed is the exact
    max word length over {0..base-1}.
    """

    base: int
    pairs_checked: int
    roundtrip_observed: int
    roundtrip_allowed: int
    samples: PairSamples


def contraction_certificate(g: int, samples: PairSamples | None = None) -> ContractionCertificate:
    """Check d(k//g, k'//g) <= d(k, k') over sampled pairs; abort on failure.

    A violation raises ContractionViolation carrying the pair; with a
    correct metric this never happens, which is the point of checking.
    """
    check_base(g)
    if samples is None:
        samples = PairSamples()
    r = samples.exhaustive_radius
    # length table over all differences the exhaustive square can produce
    table = {d: word_length(g, d) for d in range(-2 * r, 2 * r + 1)}
    checked = 0
    roundtrip_allowed = max(word_length(g, c) for c in range(g))
    roundtrip_observed = 0
    for a in range(-r, r + 1):
        fa = a // g
        for b in range(-r, r + 1):
            lhs = table[fa - b // g]
            rhs = table[a - b]
            checked += 1
            if lhs > rhs:
                raise ContractionViolation(
                    f"floor division by {g} expanded pair ({a}, {b}):"
                    f" {lhs} > {rhs}",
                    (a, b),
                )
        rt = table[a - g * fa]
        if rt > roundtrip_allowed:
            raise ContractionViolation(
                f"roundtrip error {rt} at {a} exceeds bound {roundtrip_allowed}",
                (a, a),
            )
        roundtrip_observed = max(roundtrip_observed, rt)
    for a, b in samples.random_pairs():
        lhs = distance(g, a // g, b // g)
        rhs = distance(g, a, b)
        checked += 1
        if lhs > rhs:
            raise ContractionViolation(
                f"floor division by {g} expanded pair ({a}, {b}): {lhs} > {rhs}",
                (a, b),
            )
        rt = distance(g, g * (a // g), a)
        if rt > roundtrip_allowed:
            raise ContractionViolation(
                f"roundtrip error {rt} at {a} exceeds bound {roundtrip_allowed}",
                (a, a),
            )
        roundtrip_observed = max(roundtrip_observed, rt)
    return ContractionCertificate(
        base=g,
        pairs_checked=checked,
        roundtrip_observed=roundtrip_observed,
        roundtrip_allowed=roundtrip_allowed,
        samples=samples,
    )


@dataclass(frozen=True)
class InvertibilityEvidence:
    """Evidence that multiplication by `prime` is coarsely invertible.

    The certificate covers floor division by the full base g, which is
    a contraction; invertibility descends to each prime divisor of g
    because invertible exponents are closed under division.  The
    prime-specific roundtrip bound (the exact max word length of
    {0..prime-1}) is recorded alongside.
    """

    prime: int
    base: int
    certificate: ContractionCertificate
    prime_roundtrip_allowed: int
    closure_note: str


@dataclass(frozen=True)
class DivergenceEvidence:
    """Evidence against coarse invertibility of multiplication by `prime`.

    A bounded-error inverse would have to pull the two-generator-wide
    image sequence back to the witness terms, whose lengths keep
    growing; the recorded tail checks make that growth explicit.
    """

    prime: int
    base: int
    terms_computed: int
    lengths: tuple[int, ...]
    image_lengths: tuple[int, ...]
    tail_start: int
    tail_strictly_increasing: bool
    max_length: int
    threshold: int


@dataclass(frozen=True)
class PrimeVerdict:
    prime: int
    verdict: Verdict
    # one of the evidence dataclasses; profinite reuses this type with its own
    evidence: object
    reason: str = ""


@dataclass(frozen=True)
class ClassifyParams:
    i_max: int = 40
    threshold: int = 20
    samples: PairSamples = field(default_factory=PairSamples)

    def __post_init__(self) -> None:
        if self.i_max < 1:
            raise ValueError(f"i_max must be >= 1, got {self.i_max}")
        if self.threshold < 1:
            raise ValueError(f"threshold must be >= 1, got {self.threshold}")


def classify_prime(
    g: int,
    p: int,
    params: ClassifyParams | None = None,
    certificate: ContractionCertificate | None = None,
) -> PrimeVerdict:
    """Classify multiplication by the prime p on the base-g metric.

    p dividing g yields INVERTIBLE backed by a contraction certificate
    (computed here unless one for this g is passed in).  Otherwise a
    divergence witness is built; it must have a strictly increasing
    length tail over its last ceil(i_max/2) terms and exceed the
    threshold, or the verdict stays UNDECIDED.
    """
    check_base(g)
    check_prime(p)
    if params is None:
        params = ClassifyParams()
    if g % p == 0:
        if certificate is None or certificate.base != g:
            certificate = contraction_certificate(g, params.samples)
        evidence = InvertibilityEvidence(
            prime=p,
            base=g,
            certificate=certificate,
            prime_roundtrip_allowed=max(word_length(g, c) for c in range(p)),
            closure_note=(
                f"floor division by {g} is a verified contraction, so"
                f" multiplication by {g} is coarsely invertible; invertible"
                f" exponents are closed under division, hence {p} | {g}"
                f" is invertible too"
            ),
        )
        return PrimeVerdict(prime=p, verdict=Verdict.INVERTIBLE, evidence=evidence)
    witness = divergence_witness(g, p, params.i_max)
    tail_start = params.i_max - (params.i_max + 1) // 2
    tail = witness.lengths[tail_start:]
    increasing = all(tail[i] < tail[i + 1] for i in range(len(tail) - 1))
    peak = witness.max_length
    evidence = DivergenceEvidence(
        prime=p,
        base=g,
        terms_computed=params.i_max,
        lengths=witness.lengths,
        image_lengths=witness.image_lengths,
        tail_start=tail_start,
        tail_strictly_increasing=increasing,
        max_length=peak,
        threshold=params.threshold,
    )
    if increasing and peak > params.threshold:
        return PrimeVerdict(prime=p, verdict=Verdict.NOT_INVERTIBLE, evidence=evidence)
    reasons = []
    if not increasing:
        reasons.append("length tail is not strictly increasing")
    if peak <= params.threshold:
        reasons.append(f"max length {peak} did not exceed threshold {params.threshold}")
    return PrimeVerdict(
        prime=p,
        verdict=Verdict.UNDECIDED,
        evidence=evidence,
        reason="; ".join(reasons),
    )


@dataclass(frozen=True)
class SpectrumReport:
    """Per-prime verdicts for one base, with the derived closure sets.

    nat_members is the sub-semigroup generated by the invertible primes
    and 1, cut to [0, closure_bound]; int_members mirrors it with signs.
    The rational spectrum is reported by its generators only, since
    maps with rational exponent are never materialized.
    """

    base: int
    primes: tuple[int, ...]
    verdicts: tuple[PrimeVerdict, ...]
    invertible_primes: tuple[int, ...]
    closure_bound: int
    nat_members: tuple[int, ...]
    int_members: tuple[int, ...]
    rational_generators: tuple[int, ...]
    composite_crosscheck_ok: bool

    @property
    def undecided_primes(self) -> tuple[int, ...]:
        return tuple(v.prime for v in self.verdicts if v.verdict is Verdict.UNDECIDED)

    @property
    def fully_decided(self) -> bool:
        return not self.undecided_primes


def spectrum(
    g: int,
    primes: tuple[int, ...],
    params: ClassifyParams | None = None,
    closure_bound: int = 20,
) -> SpectrumReport:
    """Classify each prime for base g and assemble the closure sets.

    The multiplicative-closure sieve is cross-checked against direct
    factor-by-factor classification of every n in [2, closure_bound]:
    n belongs iff all its prime factors were judged invertible.
    """
    check_base(g)
    if not primes:
        raise ValueError("primes list is empty")
    if params is None:
        params = ClassifyParams()
    if closure_bound < 1:
        raise ValueError(f"closure_bound must be >= 1, got {closure_bound}")
    ordered = tuple(sorted(set(primes)))
    cert: ContractionCertificate | None = None
    verdicts = []
    for p in ordered:
        v = classify_prime(g, p, params, certificate=cert)
        if isinstance(v.evidence, InvertibilityEvidence):
            cert = v.evidence.certificate
        verdicts.append(v)
    invertible = tuple(
        v.prime for v in verdicts if v.verdict is Verdict.INVERTIBLE
    )
    nat = tuple(smooth_numbers(invertible, closure_bound)) if invertible else (1,)
    # direct route: n is in the closure iff every prime factor is invertible
    direct = [1]
    inv_set = set(invertible)
    for n in range(2, closure_bound + 1):
        if all(q in inv_set for q in prime_factors(n)):
            direct.append(n)
    crosscheck = tuple(direct) == nat
    int_members = tuple(sorted(set(-n for n in nat) | set(nat)))
    return SpectrumReport(
        base=g,
        primes=ordered,
        verdicts=tuple(verdicts),
        invertible_primes=invertible,
        closure_bound=closure_bound,
        nat_members=nat,
        int_members=int_members,
        rational_generators=invertible,
        composite_crosscheck_ok=crosscheck,
    )


@dataclass(frozen=True)
class ComparisonResult:
    """Whether two spectrum reports separate their spaces.

    The spectrum is invariant under coarse isomorphism, so differing
    verdicts on a commonly tested prime distinguish the spaces.  Equal
    verdicts distinguish nothing: the invariant is silent.
    """

    verdict: str  # DISTINGUISHED or NOT_DISTINGUISHED
    space_a: str
    space_b: str
    common_primes: tuple[int, ...]
    differing: tuple[tuple[int, str, str], ...]
    note: str


def compare_verdicts(
    label_a: str,
    label_b: str,
    a: tuple[PrimeVerdict, ...],
    b: tuple[PrimeVerdict, ...],
) -> ComparisonResult:
    """Compare two verdict lists on their commonly tested primes.

    Raises UndecidedError when either side has an UNDECIDED verdict; a
    comparison built on undecided data would claim too much.
    """
    for label, verdicts in ((label_a, a), (label_b, b)):
        undecided = tuple(v.prime for v in verdicts if v.verdict is Verdict.UNDECIDED)
        if undecided:
            raise UndecidedError(
                f"spectrum for {label} is undecided on primes {undecided}"
            )
    va = {v.prime: v.verdict for v in a}
    vb = {v.prime: v.verdict for v in b}
    common = tuple(sorted(va.keys() & vb.keys()))
    if not common:
        raise ValueError("reports share no tested primes")
    differing = tuple(
        (p, va[p].value, vb[p].value) for p in common if va[p] is not vb[p]
    )
    if differing:
        return ComparisonResult(
            verdict="DISTINGUISHED",
            space_a=label_a,
            space_b=label_b,
            common_primes=common,
            differing=differing,
            note=(
                "invertibility spectra are invariant under coarse"
                " isomorphism; differing verdicts separate the spaces"
            ),
        )
    return ComparisonResult(
        verdict="NOT_DISTINGUISHED",
        space_a=label_a,
        space_b=label_b,
        common_primes=common,
        differing=(),
        note=(
            "spectra agree on all commonly tested primes; this invariant"
            " does not separate the spaces and says nothing either way"
        ),
    )


def compare_spectra(a: SpectrumReport, b: SpectrumReport) -> ComparisonResult:
    """Compare two single-base reports; see compare_verdicts."""
    return compare_verdicts(f"g={a.base}", f"g={b.base}", a.verdicts, b.verdicts)
