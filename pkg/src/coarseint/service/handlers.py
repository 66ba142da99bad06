"""One handler per command, shared by the CLI and the HTTP app.

A handler takes its validated request and returns the results payload
plus evidence entries; dispatch wraps them in the report envelope and
rewrites every integer as a decimal string.  Handlers raise ValueError
on violated preconditions and UndecidedError when a comparison rests
on an undecided verdict; the callers translate those into exit codes
or HTTP statuses.
"""

from __future__ import annotations

import json
import time
from enum import Enum
from typing import Callable

from .. import __version__
from ..approx import divergence_witness
from ..digits import balanced_rep, distance, quasimorphism_defect, word_length
from ..oracle import validate_formula
from ..profinite import (
    NonproperWitness,
    PrimeSet,
    QClassifyParams,
    QInvertibilityEvidence,
    compare_profinite,
    floor_div_continuity_check,
    nonproper_witness,
    q_star_members,
    qadic_inverse_sequence,
    spectrum_profinite,
)
from ..rectify import bijective_representative, build_partition
from ..spectra import (
    ClassifyParams,
    DivergenceEvidence,
    InvertibilityEvidence,
    PairSamples,
    compare_spectra,
    spectrum,
)
from .schemas import (
    CompareRequest,
    ContinuityRequest,
    DefectRequest,
    DistRequest,
    Evidence,
    InverseSeqRequest,
    LenRequest,
    NonproperRequest,
    OracleCheckRequest,
    PartitionRequest,
    ProfiniteSpectrumRequest,
    QStarRequest,
    RectifyRequest,
    Report,
    RepRequest,
    SpectrumRequest,
    WitnessRequest,
)

__all__ = ["HANDLERS", "dispatch", "run_command", "canonical_report_json", "parse_map_spec"]


def _encode(obj):
    """Rewrite integers as decimal strings, recursively; booleans stay."""
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, Enum):
        obj = obj.value
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str) or obj is None or isinstance(obj, float):
        return obj
    if isinstance(obj, dict):
        return {
            (str(k) if isinstance(k, int) and not isinstance(k, bool) else k): _encode(v)
            for k, v in obj.items()
        }
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    raise TypeError(f"cannot encode {type(obj).__name__} into a report")


def parse_map_spec(spec: str, g: int) -> tuple[str, Callable[[int], int], Callable[[int], int]]:
    """Turn a map description into (name, forward, coarse inverse).

    Accepted forms: "identity", "mul:N", "floordiv:N" with N >= 1.
    An empty spec means floor division by the base g.
    """
    if spec == "":
        spec = f"floordiv:{g}"
    if spec == "identity":
        return "identity", lambda x: x, lambda y: y
    head, sep, tail = spec.partition(":")
    if sep != ":" or head not in ("mul", "floordiv"):
        raise ValueError(f"unknown map spec {spec!r}; use identity, mul:N, or floordiv:N")
    try:
        n = int(tail)
    except ValueError:
        raise ValueError(f"map spec {spec!r} needs an integer after the colon") from None
    if n < 1:
        raise ValueError(f"map spec {spec!r} needs N >= 1")
    name = f"{head}:{n}"
    if head == "mul":
        return name, lambda x: n * x, lambda y: y // n
    return name, lambda x: x // n, lambda y: n * y


def _handle_rep(req: RepRequest):
    rep = balanced_rep(req.g, req.k)
    results = {
        "base": req.g,
        "k": req.k,
        "digits": list(rep.digits),
        "length": rep.weight,
    }
    return results, []


def _handle_len(req: LenRequest):
    return {"base": req.g, "k": req.k, "length": word_length(req.g, req.k)}, []


def _handle_dist(req: DistRequest):
    return {
        "base": req.g,
        "a": req.a,
        "b": req.b,
        "distance": distance(req.g, req.a, req.b),
    }, []


def _handle_oracle_check(req: OracleCheckRequest):
    v = validate_formula(req.g, req.lo, req.hi)
    results = {
        "base": v.base,
        "lo": v.lo,
        "hi": v.hi,
        "checked": v.checked,
        "ok": v.ok,
        "max_length": v.max_length,
    }
    evidence = [
        (
            "exhaustive_search_comparison",
            {"base": v.base, "lo": v.lo, "hi": v.hi, "generator_cap": v.generator_cap},
            {
                "ball_size": v.ball_size,
                "mismatches": [list(m) for m in v.mismatches],
                "inconclusive": list(v.inconclusive),
            },
        )
    ]
    return results, evidence


def _handle_defect(req: DefectRequest):
    name, f, _ = parse_map_spec(req.map_spec, req.g)
    r = quasimorphism_defect(f, req.g, (req.lo, req.hi))
    results = {
        "base": req.g,
        "lo": req.lo,
        "hi": req.hi,
        "map": name,
        "defect": r.defect,
    }
    evidence = [
        (
            "defect_witness",
            {"base": req.g, "lo": req.lo, "hi": req.hi, "map": name},
            {"pair": list(r.witness_pair), "defect": r.defect},
        )
    ]
    return results, evidence


def _handle_witness(req: WitnessRequest):
    w = divergence_witness(req.g, req.prime, req.i_max)
    results = {
        "base": w.base,
        "prime": w.prime,
        "i_max": req.i_max,
        "max_length": w.max_length,
        "image_length_bound": max(w.image_lengths),
    }
    evidence = [
        (
            "divergence_witness",
            {"base": w.base, "prime": w.prime, "i_max": req.i_max},
            {
                "terms": list(w.terms),
                "lengths": list(w.lengths),
                "image_lengths": list(w.image_lengths),
            },
        )
    ]
    return results, evidence


def _spectrum_evidence(verdicts) -> list:
    out = []
    for v in verdicts:
        if isinstance(v.evidence, InvertibilityEvidence):
            e = v.evidence
            s = e.certificate.samples
            out.append(
                (
                    "contraction_certificate",
                    {
                        "prime": e.prime,
                        "base": e.base,
                        "exhaustive_radius": s.exhaustive_radius,
                        "n_random": s.n_random,
                        "random_magnitude": s.random_magnitude,
                        "seed": s.seed,
                    },
                    {
                        "pairs_checked": e.certificate.pairs_checked,
                        "roundtrip_observed": e.certificate.roundtrip_observed,
                        "roundtrip_allowed": e.certificate.roundtrip_allowed,
                        "prime_roundtrip_allowed": e.prime_roundtrip_allowed,
                        "closure_note": e.closure_note,
                    },
                )
            )
        elif isinstance(v.evidence, DivergenceEvidence):
            e = v.evidence
            out.append(
                (
                    "divergence_witness",
                    {"prime": e.prime, "base": e.base, "threshold": e.threshold},
                    {
                        "terms_computed": e.terms_computed,
                        "lengths": list(e.lengths),
                        "image_lengths": list(e.image_lengths),
                        "tail_start": e.tail_start,
                        "tail_strictly_increasing": e.tail_strictly_increasing,
                        "max_length": e.max_length,
                    },
                )
            )
        else:
            out.append(("undecided", {"prime": v.prime}, {"reason": v.reason}))
    return out


def _handle_spectrum(req: SpectrumRequest):
    params = ClassifyParams(
        i_max=req.i_max,
        threshold=req.threshold,
        samples=PairSamples(seed=req.seed),
    )
    rep = spectrum(req.g, tuple(req.primes), params, closure_bound=req.member_bound)
    results = {
        "base": rep.base,
        "primes": list(rep.primes),
        "verdicts": {p: v.verdict for p, v in zip(rep.primes, rep.verdicts)},
        "invertible_primes": list(rep.invertible_primes),
        "undecided_primes": list(rep.undecided_primes),
        "closure_bound": rep.closure_bound,
        "nat_members": list(rep.nat_members),
        "int_members": list(rep.int_members),
        "rational_generators": list(rep.rational_generators),
        "composite_crosscheck_ok": rep.composite_crosscheck_ok,
    }
    return results, _spectrum_evidence(rep.verdicts)


def _handle_compare(req: CompareRequest):
    if req.g_a is not None:
        params = ClassifyParams(
            i_max=req.i_max,
            threshold=req.threshold,
            samples=PairSamples(seed=req.seed),
        )
        rep_a = spectrum(req.g_a, tuple(req.primes), params)
        rep_b = spectrum(req.g_b, tuple(req.primes), params)
        cmp = compare_spectra(rep_a, rep_b)
        sides = [(cmp.space_a, rep_a), (cmp.space_b, rep_b)]
    else:
        qparams = QClassifyParams(
            n_max=req.n_max,
            magnitude_threshold=req.magnitude_threshold,
            seed=req.seed,
        )
        rep_a = spectrum_profinite(PrimeSet(tuple(req.q_a)), tuple(req.primes), qparams)
        rep_b = spectrum_profinite(PrimeSet(tuple(req.q_b)), tuple(req.primes), qparams)
        cmp = compare_profinite(rep_a, rep_b)
        sides = [(cmp.space_a, rep_a), (cmp.space_b, rep_b)]
    results = {
        "space_a": cmp.space_a,
        "space_b": cmp.space_b,
        "verdict": cmp.verdict,
        "common_primes": list(cmp.common_primes),
        "differing": [list(d) for d in cmp.differing],
        "note": cmp.note,
    }
    evidence = [
        (
            "spectrum_verdicts",
            {"space": label},
            {
                "verdicts": {p: v.verdict for p, v in zip(r.primes, r.verdicts)},
                "invertible_primes": list(r.invertible_primes),
            },
        )
        for label, r in sides
    ]
    return results, evidence


def _handle_qstar(req: QStarRequest):
    members = q_star_members(PrimeSet(tuple(req.q)), req.bound)
    results = {
        "q": list(PrimeSet(tuple(req.q)).primes),
        "bound": req.bound,
        "members": [m.value for m in members],
        "count": len(members),
    }
    evidence = [
        (
            "factorizations",
            {"bound": req.bound},
            {"factorizations": {m.value: [list(f) for f in m.factorization] for m in members}},
        )
    ]
    return results, evidence


def _handle_inverse_seq(req: InverseSeqRequest):
    ps = PrimeSet(tuple(req.q))
    terms = qadic_inverse_sequence(ps, req.prime, req.n_max)
    moduli = [ps.tower_modulus(n) for n in range(1, req.n_max + 1)]
    results = {
        "q": list(ps.primes),
        "prime": req.prime,
        "n_max": req.n_max,
        "terms": terms,
    }
    evidence = [
        (
            "inverse_tower",
            {"prime": req.prime, "n_max": req.n_max},
            {"terms": terms, "moduli": moduli},
        )
    ]
    return results, evidence


def _handle_nonproper(req: NonproperRequest):
    ps = PrimeSet(tuple(req.q))
    w = nonproper_witness(ps, req.prime, req.n_max)
    results = {
        "q": list(ps.primes),
        "prime": w.prime,
        "n_max": w.n_max,
        "cauchy_ok": w.cauchy_ok,
        "image_converges_to_one": w.image_converges_to_one,
        "distinct_terms": w.distinct_terms,
        "max_abs": w.max_abs,
        "magnitude_threshold": req.magnitude_threshold,
        "unbounded_signature": w.max_abs > req.magnitude_threshold,
    }
    evidence = [
        (
            "nonproper_witness",
            {"prime": w.prime, "n_max": w.n_max},
            {
                "a_terms": list(w.a_terms),
                "image_terms": list(w.image_terms),
                "last_change_index": w.last_change_index,
                "magnitude_bound_checked": w.magnitude_bound_checked,
            },
        )
    ]
    return results, evidence


def _handle_continuity(req: ContinuityRequest):
    ps = PrimeSet(tuple(req.q))
    ev = floor_div_continuity_check(
        ps, req.prime, pairs=req.pairs, max_exponent=req.max_exponent, seed=req.seed
    )
    results = {
        "q": list(ps.primes),
        "prime": ev.prime,
        "pairs_checked": ev.pairs_checked,
        "max_exponent": ev.max_exponent,
        "violations": 0,
    }
    evidence = [
        (
            "floor_division_continuity",
            {
                "prime": ev.prime,
                "pairs": req.pairs,
                "max_exponent": req.max_exponent,
                "seed": req.seed,
            },
            {"moduli_used": list(ev.moduli_used)},
        )
    ]
    return results, evidence


def _profinite_evidence(verdicts) -> list:
    out = []
    for v in verdicts:
        if isinstance(v.evidence, QInvertibilityEvidence):
            e = v.evidence
            out.append(
                (
                    "qadic_invertibility",
                    {"prime": v.prime},
                    {
                        "pairs_checked": e.continuity.pairs_checked,
                        "max_exponent": e.continuity.max_exponent,
                        "moduli_used": list(e.continuity.moduli_used),
                        "covering_sets_checked": e.covering_sets_checked,
                        "covering_elements_checked": e.covering_elements_checked,
                    },
                )
            )
        elif isinstance(v.evidence, NonproperWitness):
            e = v.evidence
            out.append(
                (
                    "nonproper_witness",
                    {"prime": v.prime, "n_max": e.n_max},
                    {
                        "a_terms": list(e.a_terms),
                        "image_terms": list(e.image_terms),
                        "cauchy_ok": e.cauchy_ok,
                        "image_converges_to_one": e.image_converges_to_one,
                        "distinct_terms": e.distinct_terms,
                        "max_abs": e.max_abs,
                        "magnitude_bound_checked": e.magnitude_bound_checked,
                    },
                )
            )
        else:
            out.append(("undecided", {"prime": v.prime}, {"reason": v.reason}))
    return out


def _handle_profinite_spectrum(req: ProfiniteSpectrumRequest):
    ps = PrimeSet(tuple(req.q))
    params = QClassifyParams(
        n_max=req.n_max,
        magnitude_threshold=req.magnitude_threshold,
        continuity_pairs=req.continuity_pairs,
        covering_sets=req.covering_sets,
        seed=req.seed,
    )
    rep = spectrum_profinite(ps, tuple(req.primes), params, closure_bound=req.member_bound)
    results = {
        "q": list(ps.primes),
        "primes": list(rep.primes),
        "verdicts": {p: v.verdict for p, v in zip(rep.primes, rep.verdicts)},
        "invertible_primes": list(rep.invertible_primes),
        "undecided_primes": list(rep.undecided_primes),
        "closure_bound": rep.closure_bound,
        "nat_members": list(rep.nat_members),
        "int_members": list(rep.int_members),
        "rational_generators": list(rep.rational_generators),
    }
    return results, _profinite_evidence(rep.verdicts)


def _handle_partition(req: PartitionRequest):
    cover = build_partition(req.g, req.lo, req.hi)
    results = {
        "base": cover.base,
        "lo": cover.lo,
        "hi": cover.hi,
        "block_count": len(cover.blocks),
        "element_count": req.hi - req.lo + 1,
        "blocks": {n: list(ms) for n, ms in cover.blocks.items()},
    }
    evidence = [
        (
            "tiling_verification",
            {"base": req.g, "lo": req.lo, "hi": req.hi},
            {"block_count": len(cover.blocks), "element_count": req.hi - req.lo + 1},
        )
    ]
    return results, evidence


def _handle_rectify(req: RectifyRequest):
    name, f, f_inv = parse_map_spec(req.map_spec, req.g)
    r = bijective_representative(req.g, req.lo, req.hi, f, f_inv)
    results = {
        "base": r.base,
        "lo": r.lo,
        "hi": r.hi,
        "map": name,
        "audit": r.audit,
        "size": r.hi - r.lo + 1,
        "attempts": r.attempts,
    }
    evidence = [
        (
            "bijection_audit",
            {"base": r.base, "lo": r.lo, "hi": r.hi, "map": name},
            {
                "audit": r.audit,
                "fwd_pad": r.fwd_pad,
                "bwd_pad": r.bwd_pad,
                "fwd_kept": r.fwd_kept,
                "bwd_kept": r.bwd_kept,
            },
        ),
        (
            "bijection_table",
            {"base": r.base, "lo": r.lo, "hi": r.hi, "map": name},
            {"mapping": dict(sorted(r.bijection.items()))},
        ),
    ]
    return results, evidence


HANDLERS: dict[str, tuple[type, Callable]] = {
    "rep": (RepRequest, _handle_rep),
    "len": (LenRequest, _handle_len),
    "dist": (DistRequest, _handle_dist),
    "oracle-check": (OracleCheckRequest, _handle_oracle_check),
    "defect": (DefectRequest, _handle_defect),
    "witness": (WitnessRequest, _handle_witness),
    "spectrum": (SpectrumRequest, _handle_spectrum),
    "compare": (CompareRequest, _handle_compare),
    "qstar": (QStarRequest, _handle_qstar),
    "inverse-seq": (InverseSeqRequest, _handle_inverse_seq),
    "nonproper": (NonproperRequest, _handle_nonproper),
    "continuity": (ContinuityRequest, _handle_continuity),
    "profinite-spectrum": (ProfiniteSpectrumRequest, _handle_profinite_spectrum),
    "partition": (PartitionRequest, _handle_partition),
    "rectify": (RectifyRequest, _handle_rectify),
}


def dispatch(command: str, req) -> Report:
    """Run one command's handler and wrap the outcome in a report."""
    if command not in HANDLERS:
        raise ValueError(f"unknown command {command!r}")
    start = time.perf_counter()
    results, evidence = HANDLERS[command][1](req)
    duration_ms = int((time.perf_counter() - start) * 1000)
    return Report(
        command=command,
        config=_encode(req.model_dump()),
        results=_encode(results),
        evidence=[
            Evidence(kind=kind, parameters=_encode(params), data=_encode(data))
            for kind, params, data in evidence
        ],
        version=__version__,
        duration_ms=duration_ms,
    )


def run_command(command: str, payload: dict) -> Report:
    """Validate a raw payload against the command's request model and run it."""
    if command not in HANDLERS:
        raise ValueError(f"unknown command {command!r}")
    model = HANDLERS[command][0]
    return dispatch(command, model.model_validate(payload))


def canonical_report_json(report: Report) -> str:
    """The deterministic rendering: sorted keys, two-space indent."""
    return json.dumps(report.model_dump(), sort_keys=True, indent=2) + "\n"
