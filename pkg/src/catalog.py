# Formula catalog: a JSON document of exact formula encodings
from __future__ import annotations

import json
import re
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional

from pydantic import BaseModel, ValidationError, field_validator, model_validator

from .core.factorization import FamilyId
from .core.hyperseries import AlgebraicConstant, DenomPattern, FormulaSpec, LValueTag
from .errors import CatalogError
from .utils import dump_json, format_rational, parse_rational, setup_logging, write_file

logger = setup_logging()

CATALOG_SCHEMA_VERSION = "1.0"


class EntryStatus(str, Enum):
    PROVEN_VIA_TRANSLATION = "proven-via-translation"
    EQUIVALENT_TO = "equivalent-to"
    CONJECTURAL = "conjectural"
    DISCOVERED = "discovered"
    FORMAL_DIVERGENT = "formal-divergent"


def _rational_text(value: str) -> str:
    parse_rational(value)
    return value


class LValueModel(BaseModel):
    discriminant: int = -7
    s: int = 2
    coefficient: str = "1"
    shift: str = "0"

    @field_validator("coefficient", "shift")
    @classmethod
    def _check_rationals(cls, value: str) -> str:
        return _rational_text(value)


class ConstantModel(BaseModel):
    rat: str = "1"
    surd: int = 1
    pi_power: int = 0
    l_value: Optional[LValueModel] = None

    @field_validator("rat")
    @classmethod
    def _check_rat(cls, value: str) -> str:
        return _rational_text(value)

    def to_constant(self) -> AlgebraicConstant:
        tag = None
        if self.l_value is not None:
            tag = LValueTag(
                self.l_value.discriminant,
                self.l_value.s,
                parse_rational(self.l_value.coefficient),
                parse_rational(self.l_value.shift),
            )
        return AlgebraicConstant(parse_rational(self.rat), self.surd, self.pi_power, tag)

    @classmethod
    def from_constant(cls, value: AlgebraicConstant) -> "ConstantModel":
        tag = None
        if value.l_value is not None:
            tag = LValueModel(
                discriminant=value.l_value.discriminant,
                s=value.l_value.s,
                coefficient=format_rational(value.l_value.coefficient),
                shift=format_rational(value.l_value.shift),
            )
        return cls(rat=format_rational(value.rat), surd=value.surd, pi_power=value.pi_power, l_value=tag)


class FormulaModel(BaseModel):
    upper: List[str]
    lower: List[str]
    z: str
    numerator: List[int]
    denom_pattern: DenomPattern = DenomPattern.ONE
    scale: str = "1"
    start_index: int = 0
    rhs: Optional[ConstantModel] = None

    @field_validator("upper", "lower")
    @classmethod
    def _check_parameters(cls, values: List[str]) -> List[str]:
        for v in values:
            parse_rational(v)
        return values

    @field_validator("z", "scale")
    @classmethod
    def _check_rationals(cls, value: str) -> str:
        return _rational_text(value)

    def to_spec(self, conjectural: bool = False) -> FormulaSpec:
        return FormulaSpec(
            upper=tuple(parse_rational(u) for u in self.upper),
            lower=tuple(parse_rational(v) for v in self.lower),
            z=parse_rational(self.z),
            numerator=tuple(self.numerator),
            denom_pattern=self.denom_pattern,
            rhs=self.rhs.to_constant() if self.rhs is not None else None,
            scale=parse_rational(self.scale),
            start_index=self.start_index,
            conjectural=conjectural,
        )

    @classmethod
    def from_spec(cls, f: FormulaSpec) -> "FormulaModel":
        return cls(
            upper=[format_rational(u) for u in f.upper],
            lower=[format_rational(v) for v in f.lower],
            z=format_rational(f.z),
            numerator=list(f.numerator),
            denom_pattern=f.denom_pattern,
            scale=format_rational(f.scale),
            start_index=f.start_index,
            rhs=ConstantModel.from_constant(f.rhs) if f.rhs is not None else None,
        )


class CatalogEntry(BaseModel):
    id: str
    formula: FormulaModel
    status: EntryStatus
    family: Optional[FamilyId] = None
    equivalent_to: Optional[str] = None
    provenance: str = ""

    @model_validator(mode="after")
    def _check_status(self) -> "CatalogEntry":
        if self.status is EntryStatus.EQUIVALENT_TO and not self.equivalent_to:
            raise ValueError(f"entry {self.id} is equivalent-to but names no target")
        z = parse_rational(self.formula.z)
        if self.status is EntryStatus.FORMAL_DIVERGENT and abs(z) < 1:
            raise ValueError(f"entry {self.id} is formal-divergent but |z| < 1")
        return self

    @property
    def convergent(self) -> bool:
        return abs(parse_rational(self.formula.z)) < 1

    def to_spec(self) -> FormulaSpec:
        return self.formula.to_spec(conjectural=self.status is EntryStatus.CONJECTURAL)


class Catalog(BaseModel):
    schema_version: str = CATALOG_SCHEMA_VERSION
    entries: List[CatalogEntry]

    @model_validator(mode="after")
    def _check_references(self) -> "Catalog":
        seen = set()
        for entry in self.entries:
            if entry.id in seen:
                raise ValueError(f"duplicate id {entry.id}")
            seen.add(entry.id)
        for entry in self.entries:
            if entry.equivalent_to is not None and entry.equivalent_to not in seen:
                raise ValueError(f"entry {entry.id} refers to unknown id {entry.equivalent_to}")
        return self

    @property
    def by_id(self) -> Dict[str, CatalogEntry]:
        return {entry.id: entry for entry in self.entries}

    def get(self, entry_id: str) -> CatalogEntry:
        entry = self.by_id.get(entry_id)
        if entry is None:
            raise CatalogError(f"no catalog entry with id {entry_id!r}")
        return entry

    def add(self, entry: CatalogEntry) -> "Catalog":
        return Catalog(schema_version=self.schema_version, entries=[*self.entries, entry])


def _entry_line(text: str, index: int) -> Optional[int]:
    """Line of the index-th "id" key, which opens the offending entry."""
    matches = list(re.finditer(r'"id"\s*:', text))
    if index < len(matches):
        return text.count("\n", 0, matches[index].start()) + 1
    return None


def _error_line(text: str, error: ValidationError) -> Optional[int]:
    for detail in error.errors():
        loc = detail.get("loc", ())
        if len(loc) >= 2 and loc[0] == "entries" and isinstance(loc[1], int):
            return _entry_line(text, loc[1])
        message = detail.get("msg", "")
        found = re.search(r"(?:entry|id) (\S+)", message)
        if found:
            key = re.search(r'"id"\s*:\s*"' + re.escape(found.group(1)) + '"', text)
            if key:
                return text.count("\n", 0, key.start()) + 1
    return None


def parse_catalog(text: str) -> Catalog:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise CatalogError(f"invalid JSON: {e.msg}", line=e.lineno)
    try:
        return Catalog.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first.get("loc", ()))
        raise CatalogError(f"{where}: {first.get('msg')}", line=_error_line(text, e))


def load_catalog(path: str) -> Catalog:
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise CatalogError(f"cannot read catalog {path}: {e}")
    catalog = parse_catalog(text)
    logger.debug(f"loaded {len(catalog.entries)} catalog entries from {path}")
    return catalog


def serialize_catalog(catalog: Catalog) -> str:
    return dump_json(catalog.model_dump(mode="json"))


def save_catalog(catalog: Catalog, path: str) -> None:
    write_file(path, serialize_catalog(catalog))


def discovered_entry(entry_id: str, f: FormulaSpec, provenance: str) -> CatalogEntry:
    return CatalogEntry(
        id=entry_id,
        formula=FormulaModel.from_spec(f),
        status=EntryStatus.DISCOVERED,
        provenance=provenance,
    )


def next_discovered_id(catalog: Catalog, z: Fraction) -> str:
    base = f"discovered-{format_rational(z).replace('/', '_')}"
    ids = catalog.by_id
    if base not in ids:
        return base
    k = 2
    while f"{base}-{k}" in ids:
        k += 1
    return f"{base}-{k}"
