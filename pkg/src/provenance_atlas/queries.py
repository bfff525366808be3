"""The three record-retrieval modes over a loaded dataset.

All queries are read-only and deterministic: result copies come back in
dataset order so the information panel's button list is predictable.
Unresolved locations take part under the "??" sentinel rather than being
dropped. Result statistics count the matched transfer instances and the
distinct known countries touched by their endpoints.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .core import Provenance
from .dataset import Dataset
from .gazetteer import normalize_place
from .heatmaps import UNKNOWN, flatten_transfers, od_labels
from .transfers import Transfer


class UnknownLabelError(ValueError):
    """The queried label is outside the dataset's value domain."""


class NotFoundError(KeyError):
    """No copy carries the requested id."""


class QueryKind(enum.Enum):
    OD_CELL = "od"
    FULL_JOURNEY = "journey"
    MEI_ID = "id"


@dataclass(frozen=True)
class QuerySpec:
    kind: QueryKind
    od: Optional[tuple[str, str]] = None        # (from country, to country)
    journey: Optional[tuple[str, str]] = None   # (origin, destination), place or country
    id: Optional[str] = None

    def __post_init__(self) -> None:
        present = {
            QueryKind.OD_CELL: self.od is not None and self.journey is None and self.id is None,
            QueryKind.FULL_JOURNEY: self.journey is not None and self.od is None and self.id is None,
            QueryKind.MEI_ID: self.id is not None and self.od is None and self.journey is None,
        }
        if not present[self.kind]:
            raise ValueError(f"exactly the field matching {self.kind} must be set")


class QueryStats(NamedTuple):
    n_copies: int
    n_matched_transfers: int
    n_distinct_countries: int


@dataclass(frozen=True)
class QueryResult:
    spec: QuerySpec
    copy_ids: tuple[str, ...]
    matched_transfers: dict[str, frozenset[int]]
    stats: QueryStats


def _stats_for(copy_ids: list[str],
               matched: dict[str, frozenset[int]],
               transfers_of) -> QueryStats:
    n_matched = sum(len(js) for js in matched.values())
    countries: set[str] = set()
    for mei_id, js in matched.items():
        for t in transfers_of(mei_id):
            if t.order_index in js:
                for code in (t.from_country, t.to_country):
                    if code is not None:
                        countries.add(code)
    return QueryStats(len(copy_ids), n_matched, len(countries))


def _result(spec: QuerySpec, dataset: Dataset,
            matched: dict[str, frozenset[int]]) -> QueryResult:
    copy_ids = [c.mei_id for c in dataset.copies if c.mei_id in matched]
    return QueryResult(
        spec=spec,
        copy_ids=tuple(copy_ids),
        matched_transfers=matched,
        stats=_stats_for(copy_ids, matched, dataset.transfers_of),
    )


def _od_label(code: Optional[str]) -> str:
    return code if code is not None else UNKNOWN


def query_od_cell(dataset: Dataset, from_country: str, to_country: str) -> QueryResult:
    """Copies with at least one transfer matching an OD heatmap cell."""
    labels = set(od_labels(flatten_transfers(dataset)))
    for code in (from_country, to_country):
        if code not in labels:
            raise UnknownLabelError(f"UNKNOWN_LABEL: {code!r} is not an OD grid label")
    matched: dict[str, frozenset[int]] = {}
    for copy in dataset.copies:
        js = frozenset(
            t.order_index for t in dataset.transfers_of(copy.mei_id)
            if _od_label(t.from_country) == from_country
            and _od_label(t.to_country) == to_country
        )
        if js:
            matched[copy.mei_id] = js
    spec = QuerySpec(kind=QueryKind.OD_CELL, od=(from_country, to_country))
    return _result(spec, dataset, matched)


def _location_matcher(dataset: Dataset, label: str):
    """Build a Provenance predicate for a place name, country code, or "??"."""
    if label == UNKNOWN:
        return lambda p: p.geo is None
    countries = {p.geo.country_code for c in dataset.copies
                 for p in c.provenances if p.geo is not None}
    if len(label) == 2 and label.isupper() and label in countries:
        return lambda p: p.geo is not None and p.geo.country_code == label
    key = normalize_place(label)
    places = {normalize_place(p.place) for c in dataset.copies
              for p in c.provenances if p.place is not None}
    if key in places:
        return lambda p: p.place is not None and normalize_place(p.place) == key
    raise UnknownLabelError(f"UNKNOWN_LABEL: {label!r} matches no place or country in the dataset")


def query_full_journey(dataset: Dataset, origin: str, destination: str) -> QueryResult:
    """Copies whose first provenance matches origin and last matches destination.

    Each argument independently names either a place (place-level match) or a
    country code (country-level match); "??" selects unresolved locations.
    Matched transfers cover the whole journey of each hit.
    """
    match_origin = _location_matcher(dataset, origin)
    match_destination = _location_matcher(dataset, destination)
    matched: dict[str, frozenset[int]] = {}
    for copy in dataset.copies:
        if not copy.provenances:
            continue
        if match_origin(copy.provenances[0]) and match_destination(copy.provenances[-1]):
            matched[copy.mei_id] = frozenset(
                t.order_index for t in dataset.transfers_of(copy.mei_id))
    spec = QuerySpec(kind=QueryKind.FULL_JOURNEY, journey=(origin, destination))
    return _result(spec, dataset, matched)


def query_by_id(dataset: Dataset, mei_id: str) -> QueryResult:
    """Singleton lookup; all transfers of the copy count as matched."""
    copy = dataset.copy(mei_id)
    if copy is None:
        raise NotFoundError(f"NOT_FOUND: no copy {mei_id!r}")
    matched = {mei_id: frozenset(
        t.order_index for t in dataset.transfers_of(mei_id))}
    spec = QuerySpec(kind=QueryKind.MEI_ID, id=mei_id)
    return _result(spec, dataset, matched)


def run_query(dataset: Dataset, spec: QuerySpec) -> QueryResult:
    if spec.kind is QueryKind.OD_CELL:
        return query_od_cell(dataset, *spec.od)
    if spec.kind is QueryKind.FULL_JOURNEY:
        return query_full_journey(dataset, *spec.journey)
    return query_by_id(dataset, spec.id)
