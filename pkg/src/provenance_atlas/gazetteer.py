"""Offline place-name gazetteer.

Resolves the free-text place strings found in provenance records to
coordinates and a modern country code. Lookups go through a normalization
step (case-fold, trim, collapse internal whitespace) and an alias table, so
" Firenze " and "Florence" land on the same entry. No network, no fuzzy
matching: a name either resolves or it does not.

File format (UTF-8 CSV, no header): 4-column rows ``name,lat,lon,country``
define entries; 2-column rows ``alias,canonical_name`` define aliases.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from .core import GeoPoint, PlaceName


class GazetteerError(ValueError):
    """Raised when a gazetteer file violates its structural invariants."""


def normalize_place(name: str) -> str:
    """Case-fold, strip, and collapse internal whitespace."""
    return " ".join(name.split()).casefold()


@dataclass(frozen=True)
class Gazetteer:
    """Immutable place-name index. Safe for concurrent lookups after load."""

    entries: dict[str, GeoPoint]  # normalized canonical name -> point
    aliases: dict[str, str]       # normalized alias -> normalized canonical name
    display_names: dict[str, str] = field(default_factory=dict)  # normalized -> original spelling

    def resolve(self, name: str) -> Optional[tuple[PlaceName, GeoPoint]]:
        """Return (canonical display name, point) for a raw place string, or None."""
        key = normalize_place(name)
        key = self.aliases.get(key, key)
        point = self.entries.get(key)
        if point is None:
            return None
        return self.display_names.get(key, key), point


def geocode_place(name: str, gaz: Gazetteer) -> Optional[GeoPoint]:
    """Look up a raw place string; absence is a value, not an error."""
    resolved = gaz.resolve(name)
    return resolved[1] if resolved is not None else None


def load_gazetteer(text: str) -> Gazetteer:
    """Parse gazetteer CSV content, enforcing uniqueness and alias closure."""
    entries: dict[str, GeoPoint] = {}
    aliases: dict[str, str] = {}
    display_names: dict[str, str] = {}
    alias_rows: list[tuple[str, str, int]] = []

    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) == 4:
            name, lat, lon, country = (cell.strip() for cell in row)
            key = normalize_place(name)
            if key in entries:
                raise GazetteerError(f"line {lineno}: duplicate entry {name!r}")
            try:
                point = GeoPoint(float(lat), float(lon), country)
            except ValueError as exc:
                raise GazetteerError(f"line {lineno}: {exc}") from exc
            entries[key] = point
            display_names[key] = name
        elif len(row) == 2:
            alias, canonical = (cell.strip() for cell in row)
            alias_rows.append((normalize_place(alias), normalize_place(canonical), lineno))
        else:
            raise GazetteerError(f"line {lineno}: expected 2 or 4 columns, got {len(row)}")

    for alias_key, canonical_key, lineno in alias_rows:
        if canonical_key not in entries:
            raise GazetteerError(
                f"line {lineno}: alias target {canonical_key!r} has no entry")
        if alias_key in entries:
            raise GazetteerError(
                f"line {lineno}: alias {alias_key!r} shadows an entry")
        aliases[alias_key] = canonical_key

    return Gazetteer(entries=entries, aliases=aliases, display_names=display_names)


def load_gazetteer_file(path: str) -> Gazetteer:
    with open(path, encoding="utf-8") as handle:
        return load_gazetteer(handle.read())


def builtin_gazetteer() -> Gazetteer:
    """The gazetteer shipped with the package (major book-trade places)."""
    text = resources.files("provenance_atlas").joinpath("data/gazetteer.csv").read_text("utf-8")
    return load_gazetteer(text)
