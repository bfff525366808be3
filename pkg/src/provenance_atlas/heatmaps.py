"""Flattened-instance aggregation into queryable heatmap grids.

Transfers and provenances are pulled out of the copy hierarchy and counted
as individual instances: an origin-destination country matrix over all
transfers, a copy-by-period matrix over provenance stay intervals, and a
copy-by-country matrix over stay locations. Every matrix keeps exact
marginal identities by counting unresolved locations under a "??" sentinel
instead of dropping them.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from datetime import date
from typing import Iterable, Optional, Sequence

from .core import Copy
from .dataset import Dataset
from .transfers import Journey, Transfer, journey_of, reconstruct_transfers

UNKNOWN = "??"

DEFAULT_BUCKET_WIDTH = 25


class GridKind(enum.Enum):
    OD_INSTANCES = "od_instances"
    COPY_TIME = "copy_time"
    COPY_LOCATION = "copy_location"


class GridOrdering(enum.Enum):
    FREQUENCY = "frequency"
    ALPHABETICAL = "alphabetical"
    DATASET = "dataset"


class InvalidBucketError(ValueError):
    """Time bucket width must be at least one year."""


@dataclass(frozen=True)
class HeatmapGrid:
    """A labeled count matrix. counts[r][c] belongs to (row_labels[r], col_labels[c])."""

    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]
    kind: GridKind
    ordering: GridOrdering

    def cell(self, row: str, col: str) -> int:
        return self.counts[self.row_labels.index(row)][self.col_labels.index(col)]

    def row_sum(self, row: str) -> int:
        return sum(self.counts[self.row_labels.index(row)])

    @property
    def grand_total(self) -> int:
        return sum(sum(row) for row in self.counts)

    def to_csv(self) -> str:
        """Labels in the first row and column; stable byte-for-byte output."""
        lines = ["," + ",".join(_csv_cell(c) for c in self.col_labels)]
        for label, row in zip(self.row_labels, self.counts):
            lines.append(_csv_cell(label) + "," + ",".join(str(v) for v in row))
        return "\n".join(lines) + "\n"


def _csv_cell(value: str) -> str:
    if any(ch in value for ch in ',"\n'):
        return '"' + value.replace('"', '""') + '"'
    return value


def flatten_transfers(dataset: Dataset) -> list[Transfer]:
    """All transfer instances in dataset order; (copy_id, j) stays recoverable."""
    flat: list[Transfer] = []
    for copy in dataset.copies:
        flat.extend(dataset.transfers_of(copy.mei_id))
    return flat


def _country_of(code: Optional[str]) -> str:
    return code if code is not None else UNKNOWN


def od_labels(transfers: Sequence[Transfer]) -> tuple[str, ...]:
    """Union of origin and destination countries, "??" included when present."""
    labels = {_country_of(t.from_country) for t in transfers}
    labels |= {_country_of(t.to_country) for t in transfers}
    return tuple(sorted(labels))


def od_matrix(transfers: Sequence[Transfer],
              ordering: GridOrdering = GridOrdering.FREQUENCY) -> HeatmapGrid:
    """Origin-destination counts over flattened transfers.

    Rows are origin countries, columns destination countries, over the same
    label universe. FREQUENCY sorts rows by outgoing totals and columns by
    incoming totals independently (non-increasing, ties alphabetical);
    ALPHABETICAL sorts labels on both axes.
    """
    if ordering not in (GridOrdering.FREQUENCY, GridOrdering.ALPHABETICAL):
        raise ValueError(f"od_matrix supports frequency/alphabetical, not {ordering}")
    labels = od_labels(transfers)
    index = {label: i for i, label in enumerate(labels)}
    n = len(labels)
    cells = [[0] * n for _ in range(n)]
    for t in transfers:
        cells[index[_country_of(t.from_country)]][index[_country_of(t.to_country)]] += 1

    if ordering is GridOrdering.ALPHABETICAL or n == 0:
        row_order = col_order = list(range(n))
    else:
        row_totals = [sum(cells[i]) for i in range(n)]
        col_totals = [sum(cells[i][j] for i in range(n)) for j in range(n)]
        row_order = sorted(range(n), key=lambda i: (-row_totals[i], labels[i]))
        col_order = sorted(range(n), key=lambda j: (-col_totals[j], labels[j]))

    return HeatmapGrid(
        row_labels=tuple(labels[i] for i in row_order),
        col_labels=tuple(labels[j] for j in col_order),
        counts=tuple(tuple(cells[i][j] for j in col_order) for i in row_order),
        kind=GridKind.OD_INSTANCES,
        ordering=ordering,
    )


UNDATED = "undated"


def _stay_interval(start: Optional[int], end: Optional[int]) -> Optional[tuple[int, int]]:
    """The known year span of a stay, or None when fully undated."""
    years = [y for y in (start, end) if y is not None]
    if not years:
        return None
    return min(years), max(years)


def time_bucket_starts(dataset: Dataset, width: int,
                       current_year: Optional[int] = None) -> list[int]:
    """Bucket lower bounds from the earliest print year up to the current year."""
    if current_year is None:
        current_year = date.today().year
    years = [e.print_year for e in dataset.editions]
    if not years:
        years = [y for c in dataset.copies for p in c.provenances
                 for y in (p.start_year, p.end_year) if y is not None]
    if not years:
        return []
    first = (min(years) // width) * width
    return list(range(first, current_year + 1, width))


def time_heatmap(dataset: Dataset, bucket_width: int = DEFAULT_BUCKET_WIDTH,
                 current_year: Optional[int] = None) -> HeatmapGrid:
    """Stay counts per copy and historical period.

    A provenance increments every bucket its known [start, end] span overlaps
    (buckets are [lo, lo+width) on whole years); a provenance with no year at
    all increments only the trailing "undated" column.
    """
    if bucket_width < 1:
        raise InvalidBucketError(f"INVALID_BUCKET: width must be >= 1, got {bucket_width}")
    starts = time_bucket_starts(dataset, bucket_width, current_year)
    col_labels = tuple(f"{lo}-{lo + bucket_width - 1}" for lo in starts) + (UNDATED,)
    rows = []
    for copy in dataset.copies:
        row = [0] * (len(starts) + 1)
        for prov in copy.provenances:
            span = _stay_interval(prov.start_year, prov.end_year)
            if span is None:
                row[-1] += 1
                continue
            for k, lo in enumerate(starts):
                if span[0] <= lo + bucket_width - 1 and span[1] >= lo:
                    row[k] += 1
        rows.append(tuple(row))
    return HeatmapGrid(
        row_labels=tuple(c.mei_id for c in dataset.copies),
        col_labels=col_labels,
        counts=tuple(rows),
        kind=GridKind.COPY_TIME,
        ordering=GridOrdering.DATASET,
    )


def location_heatmap(dataset: Dataset) -> HeatmapGrid:
    """Stay counts per copy and country; rows sum to the copy's block count."""
    countries = sorted({
        p.geo.country_code for c in dataset.copies for p in c.provenances if p.geo is not None
    })
    any_unresolved = any(
        p.geo is None for c in dataset.copies for p in c.provenances)
    col_labels = tuple(([UNKNOWN] if any_unresolved else []) + countries)
    index = {label: i for i, label in enumerate(col_labels)}
    rows = []
    for copy in dataset.copies:
        row = [0] * len(col_labels)
        for prov in copy.provenances:
            label = prov.geo.country_code if prov.geo is not None else UNKNOWN
            row[index[label]] += 1
        rows.append(tuple(row))
    return HeatmapGrid(
        row_labels=tuple(c.mei_id for c in dataset.copies),
        col_labels=col_labels,
        counts=tuple(rows),
        kind=GridKind.COPY_LOCATION,
        ordering=GridOrdering.DATASET,
    )


@dataclass(frozen=True)
class CopySummary:
    """Per-copy feed for the radar chart and horizontal journey row."""

    mei_id: str
    n_provenances: int
    # (order_index, start level, end level, location level) per block.
    completeness_spokes: tuple[tuple[int, str, str, str], ...]
    journey_nodes: Journey
    highlight: frozenset[int]


def copy_summary(copy: Copy,
                 active_query: Optional[tuple[str, str]] = None) -> CopySummary:
    """Summarize one copy; highlight the transfers matching an active OD query.

    active_query is an (origin country, destination country) pair as used by
    the OD cell query, "??" standing for unresolved.
    """
    spokes = tuple(
        (p.order_index,
         p.completeness.start_time.value,
         p.completeness.end_time.value,
         p.completeness.location.value)
        for p in copy.provenances
    )
    highlight: set[int] = set()
    if active_query is not None:
        origin, destination = active_query
        for t in reconstruct_transfers(copy):
            if _country_of(t.from_country) == origin and _country_of(t.to_country) == destination:
                highlight.add(t.order_index)
    return CopySummary(
        mei_id=copy.mei_id,
        n_provenances=copy.n_provenances,
        completeness_spokes=spokes,
        journey_nodes=journey_of(copy),
        highlight=frozenset(highlight),
    )
