"""Hierarchical domain model for printed-book provenance records.

The hierarchy is edition -> copy -> ordered provenance blocks. A copy's
provenance list order is the authoritative chronology; recorded years are
kept verbatim and checked, never repaired. All types are immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Optional

PlaceName = str

SEVERITY_ERROR = "error"
SEVERITY_WARNING = "warning"

# Validation rule ids.
RULE_EMPTY_PROVENANCES = "EMPTY_PROVENANCES"
RULE_NON_MONOTONE_RANGE = "NON_MONOTONE_RANGE"
RULE_ORDER_INDEX_MISMATCH = "ORDER_INDEX_MISMATCH"
RULE_MISSING_ID = "MISSING_ID"
RULE_DUPLICATE_ID = "DUPLICATE_ID"
RULE_UNKNOWN_EDITION = "UNKNOWN_EDITION"
RULE_PRINT_YEAR_RANGE = "PRINT_YEAR_RANGE"
RULE_MALFORMED_RECORD = "MALFORMED_RECORD"

# Incunabula-era print years; outside values are suspicious, not fatal.
PRINT_YEAR_RANGE = (1440, 1501)


class CompletenessLevel(enum.Enum):
    """How well one provenance attribute is documented."""

    ACCURATE = "accurate"
    APPROXIMATE = "approximate"
    MISSING = "missing"


@dataclass(frozen=True)
class CompletenessTriple:
    """Completeness levels for a provenance's start time, end time and location."""

    start_time: CompletenessLevel
    end_time: CompletenessLevel
    location: CompletenessLevel


@dataclass(frozen=True)
class GeoPoint:
    """A resolved place: WGS84 coordinates plus modern ISO-3166 alpha-2 country."""

    lat: float
    lon: float
    country_code: str

    def __post_init__(self) -> None:
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude out of range: {self.lat}")
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"longitude out of range: {self.lon}")
        if len(self.country_code) != 2 or not self.country_code.isupper():
            raise ValueError(f"country_code must be 2 uppercase letters: {self.country_code!r}")


@dataclass(frozen=True)
class Edition:
    """One printed edition, identified by its ISTC code."""

    istc_code: str
    title: str
    print_place: PlaceName
    print_year: int


@dataclass(frozen=True)
class Provenance:
    """One custody episode of a copy.

    ``order_index`` is the 1-based position in the owning copy's list and is
    the chronological authority; ``start_year``/``end_year`` are the recorded
    (possibly wrong or absent) calendar bounds.
    """

    order_index: int
    start_year: Optional[int]
    end_year: Optional[int]
    place: Optional[PlaceName]
    geo: Optional[GeoPoint]
    completeness: CompletenessTriple
    evidence: str = ""


@dataclass(frozen=True)
class Copy:
    """One physical copy, keyed by MEI id, with its ordered provenance blocks."""

    mei_id: str
    istc_code: str
    provenances: tuple[Provenance, ...]
    mei_url: Optional[str] = None

    @property
    def n_provenances(self) -> int:
        return len(self.provenances)


@dataclass(frozen=True)
class ValidationFinding:
    """One structural problem in a record. Findings are data, not failures."""

    severity: str  # "error" | "warning"
    rule: str
    record_id: str
    provenance_index: Optional[int] = None
    message: str = ""


def validate_copy(copy: Copy) -> list[ValidationFinding]:
    """Check a copy's structural invariants and return one finding per violation.

    Pure: never mutates the input, and repeated calls yield identical findings.
    Recorded year ranges with start > end are warnings (kept verbatim); a
    missing id, an empty provenance list, or an order_index that disagrees
    with list position are errors.
    """
    findings: list[ValidationFinding] = []
    if not copy.mei_id:
        findings.append(ValidationFinding(
            SEVERITY_ERROR, RULE_MISSING_ID, copy.mei_id,
            message="copy has no mei_id"))
    if not copy.provenances:
        findings.append(ValidationFinding(
            SEVERITY_ERROR, RULE_EMPTY_PROVENANCES, copy.mei_id,
            message="copy has no provenance blocks"))
    for position, prov in enumerate(copy.provenances, start=1):
        if prov.order_index != position:
            findings.append(ValidationFinding(
                SEVERITY_ERROR, RULE_ORDER_INDEX_MISMATCH, copy.mei_id, position,
                message=f"order_index {prov.order_index} != list position {position}"))
        if (prov.start_year is not None and prov.end_year is not None
                and prov.start_year > prov.end_year):
            findings.append(ValidationFinding(
                SEVERITY_WARNING, RULE_NON_MONOTONE_RANGE, copy.mei_id, position,
                message=f"start_year {prov.start_year} > end_year {prov.end_year}"))
    return findings


def validate_edition(edition: Edition) -> list[ValidationFinding]:
    """Check an edition record; out-of-era print years are warnings only."""
    findings: list[ValidationFinding] = []
    if not edition.istc_code:
        findings.append(ValidationFinding(
            SEVERITY_ERROR, RULE_MISSING_ID, edition.istc_code,
            message="edition has no istc code"))
    lo, hi = PRINT_YEAR_RANGE
    if not lo <= edition.print_year <= hi:
        findings.append(ValidationFinding(
            SEVERITY_WARNING, RULE_PRINT_YEAR_RANGE, edition.istc_code,
            message=f"print_year {edition.print_year} outside [{lo}, {hi}]"))
    return findings


def canonical_order(copy: Copy) -> Copy:
    """Rewrite order_index to 1..n following list position. Idempotent."""
    if all(p.order_index == i for i, p in enumerate(copy.provenances, start=1)):
        return copy
    renumbered = tuple(
        replace(p, order_index=i) for i, p in enumerate(copy.provenances, start=1)
    )
    return replace(copy, provenances=renumbered)
