"""Transfer reconstruction from ordered provenance blocks.

A copy with provenances p_1..p_n yields n-1 transfers. Transfer j runs from
block j to block j+1 and its candidate interval is (end year of j, start
year of j+1). Recorded years are frequently wrong or absent, so the 1-based
order index j is the authoritative relative time; intervals that run
backwards are kept verbatim and flagged inconsistent, never repaired.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import Copy, GeoPoint, Provenance


@dataclass(frozen=True)
class Transfer:
    """One movement between consecutive provenance blocks of a copy."""

    copy_id: str
    order_index: int           # j, the order statistic
    from_provenance: int       # == order_index
    to_provenance: int         # == order_index + 1
    interval: Optional[tuple[int, int]]  # (end of block j, start of block j+1)
    consistent: bool
    from_geo: Optional[GeoPoint] = None
    to_geo: Optional[GeoPoint] = None

    @property
    def from_country(self) -> Optional[str]:
        return self.from_geo.country_code if self.from_geo else None

    @property
    def to_country(self) -> Optional[str]:
        return self.to_geo.country_code if self.to_geo else None

    @property
    def zero_length(self) -> bool:
        """Both endpoints resolved to the same gazetteer point (a stay)."""
        return (self.from_geo is not None and self.to_geo is not None
                and self.from_geo == self.to_geo)

    @property
    def mappable(self) -> bool:
        """Drawable as a moving path: both endpoints resolved and distinct."""
        return (self.from_geo is not None and self.to_geo is not None
                and not self.zero_length)


@dataclass(frozen=True)
class JourneyNode:
    """One provenance block paired with its outgoing transfer (none for the last)."""

    provenance: Provenance
    transfer: Optional[Transfer]


Journey = tuple[JourneyNode, ...]


def reconstruct_transfers(copy: Copy) -> list[Transfer]:
    """Derive the ordered transfer list of a copy.

    For each consecutive block pair (j, j+1): the interval is (p_j.end_year,
    p_{j+1}.start_year) and is consistent iff both years exist and do not
    run backwards; a backwards interval is retained as recorded with
    consistent=False, and a missing year leaves the interval absent.
    A single-provenance copy yields no transfers.
    """
    transfers: list[Transfer] = []
    for j in range(1, len(copy.provenances)):
        here = copy.provenances[j - 1]
        there = copy.provenances[j]
        interval: Optional[tuple[int, int]] = None
        consistent = False
        if here.end_year is not None and there.start_year is not None:
            interval = (here.end_year, there.start_year)
            consistent = interval[0] <= interval[1]
        transfers.append(Transfer(
            copy_id=copy.mei_id,
            order_index=j,
            from_provenance=j,
            to_provenance=j + 1,
            interval=interval,
            consistent=consistent,
            from_geo=here.geo,
            to_geo=there.geo,
        ))
    return transfers


def journey_of(copy: Copy) -> Journey:
    """Zip each provenance with its outgoing transfer; the last block has none."""
    transfers = reconstruct_transfers(copy)
    nodes = []
    for idx, prov in enumerate(copy.provenances):
        outgoing = transfers[idx] if idx < len(transfers) else None
        nodes.append(JourneyNode(provenance=prov, transfer=outgoing))
    return tuple(nodes)
