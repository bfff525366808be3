"""Engine and explorer backend for historical book-provenance trajectories."""

from .core import (
    CompletenessLevel,
    CompletenessTriple,
    Copy,
    Edition,
    GeoPoint,
    Provenance,
    ValidationFinding,
    canonical_order,
    validate_copy,
)
from .dataset import Dataset, DatasetSnapshot, build_dataset, snapshot_digest
from .gazetteer import Gazetteer, builtin_gazetteer, geocode_place, load_gazetteer
from .ingest import IngestReport, MalformedDocumentError, derive_completeness, parse_dataset
from .transfers import Transfer, journey_of, reconstruct_transfers

__all__ = [
    "CompletenessLevel",
    "CompletenessTriple",
    "Copy",
    "Dataset",
    "DatasetSnapshot",
    "Edition",
    "Gazetteer",
    "GeoPoint",
    "IngestReport",
    "MalformedDocumentError",
    "Provenance",
    "Transfer",
    "ValidationFinding",
    "build_dataset",
    "builtin_gazetteer",
    "canonical_order",
    "derive_completeness",
    "geocode_place",
    "journey_of",
    "load_gazetteer",
    "parse_dataset",
    "reconstruct_transfers",
    "snapshot_digest",
    "validate_copy",
]
