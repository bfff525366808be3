"""Dataset ingest: JSON schema parsing, geocoding, completeness derivation.

The ingest document is UTF-8 JSON: ``{"editions": [...], "copies": [...]}``
where each copy carries its provenance blocks in chronological order. A
normalized export of the same schema (plus resolved coordinates) can be
re-ingested to reproduce the identical in-memory dataset, which is what the
snapshot digest is computed over.

Approximation is an explicit per-field quality flag ("accurate"/"approx")
set by curators, never inferred from text like "ca. 1500".
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

from .core import (
    SEVERITY_ERROR,
    RULE_DUPLICATE_ID,
    RULE_MALFORMED_RECORD,
    RULE_MISSING_ID,
    RULE_UNKNOWN_EDITION,
    CompletenessLevel,
    CompletenessTriple,
    Copy,
    Edition,
    GeoPoint,
    Provenance,
    ValidationFinding,
    validate_copy,
    validate_edition,
)
from .gazetteer import Gazetteer

QUALITY_ACCURATE = "accurate"
QUALITY_APPROX = "approx"
_QUALITY_VALUES = (QUALITY_ACCURATE, QUALITY_APPROX)


class MalformedDocumentError(ValueError):
    """The dataset file is not parseable as an ingest document at all."""


class _BadRecord(ValueError):
    """Internal: one record violates the schema and must be skipped."""


@dataclass(frozen=True)
class RawProvenance:
    """One provenance block exactly as it appears in the ingest document."""

    start_year: Optional[int] = None
    start_quality: Optional[str] = None
    end_year: Optional[int] = None
    end_quality: Optional[str] = None
    place: Optional[str] = None
    place_quality: Optional[str] = None
    evidence: str = ""
    # Resolved coordinates, present in normalized exports so re-ingest can
    # skip geocoding.
    lat: Optional[float] = None
    lon: Optional[float] = None
    country_code: Optional[str] = None


@dataclass
class IngestReport:
    """Load statistics plus everything that went wrong or stayed unresolved."""

    copies_loaded: int = 0
    provenances_loaded: int = 0
    unresolved_places: list[tuple[str, int, str]] = field(default_factory=list)
    findings: list[ValidationFinding] = field(default_factory=list)


def _level_for(value_present: bool, quality: Optional[str]) -> CompletenessLevel:
    if not value_present:
        return CompletenessLevel.MISSING
    if quality == QUALITY_APPROX:
        return CompletenessLevel.APPROXIMATE
    return CompletenessLevel.ACCURATE


def derive_completeness(record: RawProvenance, resolved: Optional[GeoPoint]) -> CompletenessTriple:
    """Classify start time, end time and location independently.

    An explicit value is Accurate, an explicit value flagged "approx" is
    Approximate, an absent value is Missing. A place that the gazetteer
    cannot resolve counts as Missing no matter what its text or flag says.
    """
    return CompletenessTriple(
        start_time=_level_for(record.start_year is not None, record.start_quality),
        end_time=_level_for(record.end_year is not None, record.end_quality),
        location=_level_for(record.place is not None and resolved is not None,
                            record.place_quality),
    )


def _expect_str(obj: dict, key: str, *, required: bool = False) -> Optional[str]:
    value = obj.get(key)
    if value is None:
        if required:
            raise _BadRecord(f"missing required field {key!r}")
        return None
    if not isinstance(value, str):
        raise _BadRecord(f"field {key!r} must be a string")
    return value

def _expect_int(obj: dict, key: str, *, required: bool = False) -> Optional[int]:
    value = obj.get(key)
    if value is None:
        if required:
            raise _BadRecord(f"missing required field {key!r}")
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise _BadRecord(f"field {key!r} must be an integer")
    return value

def _expect_float(obj: dict, key: str) -> Optional[float]:
    value = obj.get(key)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _BadRecord(f"field {key!r} must be a number")
    return float(value)

def _expect_quality(obj: dict, key: str) -> Optional[str]:
    value = _expect_str(obj, key)
    if value is not None and value not in _QUALITY_VALUES:
        raise _BadRecord(f"field {key!r} must be one of {_QUALITY_VALUES}")
    return value


_PROVENANCE_KEYS = frozenset({
    "start_year", "start_quality", "end_year", "end_quality",
    "place", "place_quality", "evidence", "lat", "lon", "country_code",
})


def _parse_raw_provenance(obj: Any) -> RawProvenance:
    if not isinstance(obj, dict):
        raise _BadRecord("provenance entry must be an object")
    evidence = _expect_str(obj, "evidence") or ""
    extras = {k: obj[k] for k in sorted(obj) if k not in _PROVENANCE_KEYS}
    if extras:
        # Catalog data is heterogeneous; keep unknown fields as opaque text.
        blob = json.dumps(extras, sort_keys=True, ensure_ascii=False)
        evidence = f"{evidence} {blob}".strip()
    return RawProvenance(
        start_year=_expect_int(obj, "start_year"),
        start_quality=_expect_quality(obj, "start_quality"),
        end_year=_expect_int(obj, "end_year"),
        end_quality=_expect_quality(obj, "end_quality"),
        place=_expect_str(obj, "place"),
        place_quality=_expect_quality(obj, "place_quality"),
        evidence=evidence,
        lat=_expect_float(obj, "lat"),
        lon=_expect_float(obj, "lon"),
        country_code=_expect_str(obj, "country_code"),
    )


def _resolve_geo(raw: RawProvenance, gaz: Optional[Gazetteer]) -> tuple[Optional[str], Optional[GeoPoint]]:
    """Return (place to store, resolved point). Explicit coordinates win."""
    if raw.lat is not None and raw.lon is not None and raw.country_code is not None:
        try:
            return raw.place, GeoPoint(raw.lat, raw.lon, raw.country_code)
        except ValueError as exc:
            raise _BadRecord(str(exc)) from exc
    if raw.place is not None and gaz is not None:
        hit = gaz.resolve(raw.place)
        if hit is not None:
            canonical, point = hit
            return canonical, point
    return raw.place, None


def parse_dataset(
    content: bytes | str,
    gaz: Optional[Gazetteer] = None,
) -> tuple[list[Edition], list[Copy], IngestReport]:
    """Parse an ingest document, geocode places, derive completeness.

    A document that is not valid JSON of the expected top-level shape raises
    MalformedDocumentError. A single bad record (edition or copy) is skipped
    and reported as a finding; everything else still loads. Loaded copies
    carry canonical 1..n order indexes.
    """
    if isinstance(content, bytes):
        content = content.decode("utf-8")
    try:
        doc = json.loads(content)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedDocumentError(f"MALFORMED_DOCUMENT: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("editions"), list) \
            or not isinstance(doc.get("copies"), list):
        raise MalformedDocumentError(
            'MALFORMED_DOCUMENT: expected {"editions": [...], "copies": [...]}')

    report = IngestReport()
    editions: list[Edition] = []
    seen_istc: set[str] = set()
    for idx, entry in enumerate(doc["editions"]):
        try:
            edition = _parse_edition(entry)
        except _BadRecord as exc:
            rule = RULE_MISSING_ID if "istc" in str(exc) else RULE_MALFORMED_RECORD
            report.findings.append(ValidationFinding(
                SEVERITY_ERROR, rule, _record_label(entry, "istc", idx), message=str(exc)))
            continue
        if edition.istc_code in seen_istc:
            report.findings.append(ValidationFinding(
                SEVERITY_ERROR, RULE_DUPLICATE_ID, edition.istc_code,
                message="duplicate istc code"))
            continue
        seen_istc.add(edition.istc_code)
        report.findings.extend(validate_edition(edition))
        editions.append(edition)

    copies: list[Copy] = []
    seen_mei: set[str] = set()
    for idx, entry in enumerate(doc["copies"]):
        try:
            copy, unresolved = _parse_copy(entry, gaz)
        except _BadRecord as exc:
            rule = RULE_MISSING_ID if "mei_id" in str(exc) else RULE_MALFORMED_RECORD
            report.findings.append(ValidationFinding(
                SEVERITY_ERROR, rule, _record_label(entry, "mei_id", idx), message=str(exc)))
            continue
        if copy.mei_id in seen_mei:
            report.findings.append(ValidationFinding(
                SEVERITY_ERROR, RULE_DUPLICATE_ID, copy.mei_id,
                message="duplicate mei_id"))
            continue
        seen_mei.add(copy.mei_id)
        if copy.istc_code not in seen_istc:
            report.findings.append(ValidationFinding(
                "warning", RULE_UNKNOWN_EDITION, copy.mei_id,
                message=f"copy references unknown edition {copy.istc_code!r}"))
        report.findings.extend(validate_copy(copy))
        report.unresolved_places.extend(unresolved)
        copies.append(copy)
        report.provenances_loaded += copy.n_provenances

    report.copies_loaded = len(copies)
    return editions, copies, report


def _record_label(entry: Any, key: str, idx: int) -> str:
    if isinstance(entry, dict) and isinstance(entry.get(key), str) and entry[key]:
        return entry[key]
    return f"#{idx}"


def _parse_edition(entry: Any) -> Edition:
    if not isinstance(entry, dict):
        raise _BadRecord("edition entry must be an object")
    istc = _expect_str(entry, "istc", required=True)
    if not istc:
        raise _BadRecord("field 'istc' must be non-empty")
    return Edition(
        istc_code=istc,
        title=_expect_str(entry, "title") or "",
        print_place=_expect_str(entry, "print_place", required=True) or "",
        print_year=_expect_int(entry, "print_year", required=True) or 0,
    )


def _parse_copy(entry: Any, gaz: Optional[Gazetteer]) -> tuple[Copy, list[tuple[str, int, str]]]:
    if not isinstance(entry, dict):
        raise _BadRecord("copy entry must be an object")
    mei_id = _expect_str(entry, "mei_id", required=True)
    if not mei_id:
        raise _BadRecord("field 'mei_id' must be non-empty")
    istc = _expect_str(entry, "istc", required=True) or ""
    blocks = entry.get("provenances")
    if not isinstance(blocks, list):
        raise _BadRecord("field 'provenances' must be a list")

    unresolved: list[tuple[str, int, str]] = []
    provenances: list[Provenance] = []
    for position, block in enumerate(blocks, start=1):
        raw = _parse_raw_provenance(block)
        place, geo = _resolve_geo(raw, gaz)
        if raw.place is not None and geo is None:
            unresolved.append((mei_id, position, raw.place))
        provenances.append(Provenance(
            order_index=position,
            start_year=raw.start_year,
            end_year=raw.end_year,
            place=place,
            geo=geo,
            completeness=derive_completeness(raw, geo),
            evidence=raw.evidence,
        ))

    return Copy(
        mei_id=mei_id,
        istc_code=istc,
        provenances=tuple(provenances),
        mei_url=_expect_str(entry, "mei_url"),
    ), unresolved


def export_normalized(editions: list[Edition], copies: list[Copy]) -> dict:
    """Project the in-memory dataset back onto the ingest schema.

    The output carries resolved coordinates, so re-ingesting it (with or
    without a gazetteer) reproduces the identical dataset. This projection
    is also what the snapshot digest hashes.
    """
    edition_docs = [
        {
            "istc": e.istc_code,
            "title": e.title,
            "print_place": e.print_place,
            "print_year": e.print_year,
        }
        for e in editions
    ]
    copy_docs = []
    for copy in copies:
        blocks = []
        for prov in copy.provenances:
            block: dict[str, Any] = {}
            if prov.start_year is not None:
                block["start_year"] = prov.start_year
            if prov.completeness.start_time is CompletenessLevel.APPROXIMATE:
                block["start_quality"] = QUALITY_APPROX
            if prov.end_year is not None:
                block["end_year"] = prov.end_year
            if prov.completeness.end_time is CompletenessLevel.APPROXIMATE:
                block["end_quality"] = QUALITY_APPROX
            if prov.place is not None:
                block["place"] = prov.place
            if prov.completeness.location is CompletenessLevel.APPROXIMATE:
                block["place_quality"] = QUALITY_APPROX
            if prov.evidence:
                block["evidence"] = prov.evidence
            if prov.geo is not None:
                block["lat"] = prov.geo.lat
                block["lon"] = prov.geo.lon
                block["country_code"] = prov.geo.country_code
            blocks.append(block)
        doc: dict[str, Any] = {
            "mei_id": copy.mei_id,
            "istc": copy.istc_code,
            "provenances": blocks,
        }
        if copy.mei_url is not None:
            doc["mei_url"] = copy.mei_url
        copy_docs.append(doc)
    return {"editions": edition_docs, "copies": copy_docs}
