"""Typed requests and the report envelope shared by the CLI and the API.

Every command has one request model; validation here covers shape and
trivial bounds, while number-theoretic preconditions (primality, base
divisibility, window sufficiency) stay in the core modules and surface
as ValueError.  Reports carry all mathematical integers as decimal
strings so the output format never promises any numeric width.
"""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, model_validator

__all__ = [
    "Evidence",
    "Report",
    "RepRequest",
    "LenRequest",
    "DistRequest",
    "OracleCheckRequest",
    "DefectRequest",
    "WitnessRequest",
    "SpectrumRequest",
    "CompareRequest",
    "QStarRequest",
    "InverseSeqRequest",
    "NonproperRequest",
    "ContinuityRequest",
    "ProfiniteSpectrumRequest",
    "PartitionRequest",
    "RectifyRequest",
]


class _Request(BaseModel):
    model_config = ConfigDict(extra="forbid")


class Evidence(BaseModel):
    """One certificate, witness, or validation record inside a report."""

    model_config = ConfigDict(extra="forbid")

    kind: str
    parameters: dict
    data: dict


class Report(BaseModel):
    """The envelope every command returns.

    Identical requests yield identical reports except for duration_ms,
    which is measured wall clock and excluded from any determinism
    comparison.
    """

    model_config = ConfigDict(extra="forbid")

    command: str
    config: dict
    results: dict
    evidence: list[Evidence]
    version: str
    duration_ms: int


class RepRequest(_Request):
    g: int = Field(ge=2)
    k: int


class LenRequest(_Request):
    g: int = Field(ge=2)
    k: int


class DistRequest(_Request):
    g: int = Field(ge=2)
    a: int
    b: int


class OracleCheckRequest(_Request):
    g: int = Field(ge=2)
    lo: int = -200
    hi: int = 200


class DefectRequest(_Request):
    g: int = Field(ge=2)
    lo: int = -500
    hi: int = 500
    map_spec: str = ""


class WitnessRequest(_Request):
    g: int = Field(ge=2)
    prime: int = Field(ge=2)
    i_max: int = Field(default=40, ge=1)


class SpectrumRequest(_Request):
    g: int = Field(ge=2)
    primes: list[int] = Field(default=[2, 3, 5, 7, 11, 13], min_length=1)
    i_max: int = Field(default=40, ge=1)
    threshold: int = Field(default=20, ge=1)
    seed: int = 0
    member_bound: int = Field(default=20, ge=1)


class CompareRequest(_Request):
    """Compare two word-metric bases or two prime sets, never a mix."""

    g_a: int | None = Field(default=None, ge=2)
    g_b: int | None = Field(default=None, ge=2)
    q_a: list[int] | None = Field(default=None, min_length=1)
    q_b: list[int] | None = Field(default=None, min_length=1)
    primes: list[int] = Field(default=[2, 3, 5, 7, 11, 13], min_length=1)
    i_max: int = Field(default=40, ge=1)
    threshold: int = Field(default=20, ge=1)
    n_max: int = Field(default=30, ge=2)
    magnitude_threshold: int = Field(default=2**20, ge=1)
    seed: int = 0

    @model_validator(mode="after")
    def _one_kind(self) -> "CompareRequest":
        g_side = (self.g_a is not None, self.g_b is not None)
        q_side = (self.q_a is not None, self.q_b is not None)
        if all(g_side) and not any(q_side):
            return self
        if all(q_side) and not any(g_side):
            return self
        raise ValueError("give either both of g_a, g_b or both of q_a, q_b")


class QStarRequest(_Request):
    q: list[int] = Field(min_length=1)
    bound: int = Field(default=100, ge=1)


class InverseSeqRequest(_Request):
    q: list[int] = Field(min_length=1)
    prime: int = Field(ge=2)
    n_max: int = Field(default=30, ge=1)


class NonproperRequest(_Request):
    q: list[int] = Field(min_length=1)
    prime: int = Field(ge=2)
    n_max: int = Field(default=30, ge=2)
    magnitude_threshold: int = Field(default=2**20, ge=1)


class ContinuityRequest(_Request):
    q: list[int] = Field(min_length=1)
    prime: int = Field(ge=2)
    pairs: int = Field(default=10_000, ge=1)
    max_exponent: int = Field(default=8, ge=1)
    seed: int = 0


class ProfiniteSpectrumRequest(_Request):
    q: list[int] = Field(min_length=1)
    primes: list[int] = Field(default=[2, 3, 5, 7, 11, 13], min_length=1)
    n_max: int = Field(default=30, ge=2)
    magnitude_threshold: int = Field(default=2**20, ge=1)
    continuity_pairs: int = Field(default=10_000, ge=1)
    covering_sets: int = Field(default=50, ge=1)
    seed: int = 0
    member_bound: int = Field(default=20, ge=1)


class PartitionRequest(_Request):
    g: int = Field(ge=2)
    lo: int
    hi: int


class RectifyRequest(_Request):
    g: int = Field(ge=2)
    lo: int
    hi: int
    map_spec: str = "mul:2"
