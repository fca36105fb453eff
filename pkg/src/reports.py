# Machine-readable JSON reports written to stdout by every command
from __future__ import annotations

from typing import Any, Dict, List, Optional

import mpmath
from pydantic import BaseModel, Field

from .core.factorization import FactorizationCheck
from .core.relations import DiscoveryResult
from .core.translator import ProofReport
from .utils import dump_json, format_rational

REPORT_SCHEMA_VERSION = "1.0"
SHOWN_DIGITS = 30


def format_number(value, digits: int = SHOWN_DIGITS) -> Optional[str]:
    if value is None:
        return None
    if isinstance(value, (int, str)):
        return str(value)
    if isinstance(value, complex):
        value = mpmath.mpc(value)
    imag = getattr(value, "imag", 0)
    if imag == 0:
        return mpmath.nstr(getattr(value, "real", value), digits)
    return mpmath.nstr(value, digits)


class Report(BaseModel):
    schema_version: str = REPORT_SCHEMA_VERSION
    command: str
    exit_code: int = 0
    errors: List[Dict[str, Any]] = Field(default_factory=list)

    def to_json(self) -> str:
        return dump_json(self.model_dump(mode="json"))


class VerifyEntry(BaseModel):
    id: str
    status: str
    digits_agreed: Optional[int] = None
    terms_used: Optional[int] = None
    seconds: float = 0.0
    conjectural: bool = False
    note: Optional[str] = None


class VerifyReport(Report):
    command: str = "verify"
    digits: int
    entries: List[VerifyEntry] = Field(default_factory=list)


class FactorizationSummary(BaseModel):
    family: str
    samples: int
    max_deviation: str
    jet_deviation: str
    passed: bool

    @classmethod
    def from_check(cls, check: FactorizationCheck) -> "FactorizationSummary":
        return cls(
            family=check.family,
            samples=check.samples,
            max_deviation=format_number(check.max_deviation, 5),
            jet_deviation=format_number(check.jet_deviation, 5),
            passed=check.passed,
        )


class TranslationSummary(BaseModel):
    family: str
    operator: List[str]
    x0: str
    operator_value: str
    surd: int
    pi_power: int
    surd_ratio: Optional[str]
    predicted_ratio: Optional[str]
    predicted_rhs: Optional[str]
    series_match: bool
    confirmed: bool
    legendre_defect: str
    verdict: str
    factorization: Optional[FactorizationSummary] = None
    notes: List[str] = Field(default_factory=list)

    @classmethod
    def from_proof(cls, proof: ProofReport) -> "TranslationSummary":
        return cls(
            family=proof.family,
            operator=[format_rational(c) for c in proof.operator],
            x0=format_number(proof.x0),
            operator_value=format_number(proof.operator_value),
            surd=proof.surd,
            pi_power=proof.pi_power,
            surd_ratio=format_rational(proof.surd_ratio) if proof.surd_ratio is not None else None,
            predicted_ratio=format_rational(proof.predicted_ratio) if proof.predicted_ratio is not None else None,
            predicted_rhs=proof.predicted_rhs,
            series_match=proof.series_match,
            confirmed=proof.confirmed,
            legendre_defect=format_number(proof.legendre_defect, 5),
            verdict=proof.verdict.value,
            factorization=FactorizationSummary.from_check(proof.factorization) if proof.factorization else None,
            notes=list(proof.notes),
        )


class ProveReport(Report):
    command: str = "prove"
    id: str
    digits: int
    method: Optional[str] = None
    verdict: Optional[str] = None
    source_id: Optional[str] = None
    translation: Optional[TranslationSummary] = None
    equivalence: Optional[Dict[str, Any]] = None
    formequiv: Optional[Dict[str, Any]] = None
    seconds: float = 0.0


class DiscoverReport(Report):
    command: str = "discover"
    y0: str
    pattern: str
    digits: int
    max_coeff: int
    found: bool = False
    relation: List[int] = Field(default_factory=list)
    norm_bound: Optional[str] = None
    linear: List[int] = Field(default_factory=list)
    numerator: List[int] = Field(default_factory=list)
    rhs: Optional[str] = None
    digits_agreed: Optional[int] = None
    added_id: Optional[str] = None
    notes: List[str] = Field(default_factory=list)

    def fill(self, result: DiscoveryResult) -> "DiscoverReport":
        self.found = result.found
        self.relation = list(result.relation.coefficients)
        self.norm_bound = format_number(result.relation.norm_bound)
        self.notes = list(result.notes)
        if result.root is not None:
            self.linear = list(result.root.linear)
        if result.verification is not None:
            self.digits_agreed = result.verification.digits_agreed
        if result.formula is not None:
            self.numerator = list(result.formula.numerator)
            self.rhs = str(result.formula.rhs)
        return self


class FactorCheckReport(Report):
    command: str = "factor-check"
    family: str
    s: Optional[str] = None
    digits: int
    samples: int
    max_deviation: Optional[str] = None
    jet_deviation: Optional[str] = None
    passed: bool = False

    def fill(self, check: FactorizationCheck) -> "FactorCheckReport":
        self.max_deviation = format_number(check.max_deviation, 5)
        self.jet_deviation = format_number(check.jet_deviation, 5)
        self.passed = check.passed
        return self
