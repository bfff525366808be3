"""Immutable dataset container and content snapshot.

A Dataset bundles the loaded editions and copies with their reconstructed
transfers and lookup indexes. It never mutates after construction, so every
consumer (grids, queries, the HTTP service) can share one instance across
threads. The snapshot digest hashes the canonical normalized projection of
the content, so two loads of equivalent data always agree.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from functools import cached_property
from typing import Optional

from .core import Copy, Edition, ValidationFinding, validate_copy, validate_edition
from .ingest import export_normalized
from .transfers import Transfer, reconstruct_transfers


@dataclass(frozen=True)
class Dataset:
    editions: tuple[Edition, ...]
    copies: tuple[Copy, ...]

    @cached_property
    def copies_by_id(self) -> dict[str, Copy]:
        return {c.mei_id: c for c in self.copies}

    @cached_property
    def editions_by_istc(self) -> dict[str, Edition]:
        return {e.istc_code: e for e in self.editions}

    @cached_property
    def transfers_by_copy(self) -> dict[str, tuple[Transfer, ...]]:
        return {c.mei_id: tuple(reconstruct_transfers(c)) for c in self.copies}

    @cached_property
    def n_provenances(self) -> int:
        return sum(c.n_provenances for c in self.copies)

    @cached_property
    def n_transfers(self) -> int:
        return sum(len(v) for v in self.transfers_by_copy.values())

    @cached_property
    def digest(self) -> str:
        return snapshot_digest(list(self.editions), list(self.copies))

    def copy(self, mei_id: str) -> Optional[Copy]:
        return self.copies_by_id.get(mei_id)

    def transfers_of(self, mei_id: str) -> tuple[Transfer, ...]:
        return self.transfers_by_copy.get(mei_id, ())

    def findings(self) -> list[ValidationFinding]:
        """Structural findings over the whole dataset (per-record rules only)."""
        found: list[ValidationFinding] = []
        for edition in self.editions:
            found.extend(validate_edition(edition))
        for copy in self.copies:
            found.extend(validate_copy(copy))
        return found


@dataclass(frozen=True)
class DatasetSnapshot:
    """Identity card of one loaded dataset: content digest plus counts."""

    digest: str
    loaded_at: str  # ISO-8601 UTC
    n_editions: int
    n_copies: int
    n_provenances: int
    n_transfers: int


def build_dataset(editions: list[Edition], copies: list[Copy]) -> Dataset:
    return Dataset(editions=tuple(editions), copies=tuple(copies))


def canonical_bytes(editions: list[Edition], copies: list[Copy]) -> bytes:
    """Canonical serialization of the normalized projection (digest input)."""
    doc = export_normalized(editions, copies)
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def snapshot_digest(editions: list[Edition], copies: list[Copy]) -> str:
    return hashlib.sha256(canonical_bytes(editions, copies)).hexdigest()


def take_snapshot(dataset: Dataset) -> DatasetSnapshot:
    return DatasetSnapshot(
        digest=dataset.digest,
        loaded_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        n_editions=len(dataset.editions),
        n_copies=len(dataset.copies),
        n_provenances=dataset.n_provenances,
        n_transfers=dataset.n_transfers,
    )
