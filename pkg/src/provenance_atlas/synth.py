"""Synthetic dataset generator for experiments and the acceptance suite.

Produces documents in the ingest schema with controllable rates of missing
years, approximation flags, and unresolvable places. Generation is seeded
and fully deterministic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .dataset import Dataset, build_dataset
from .gazetteer import Gazetteer, builtin_gazetteer
from .ingest import parse_dataset

# Resolvable names present in the shipped gazetteer; aliases exercise the
# normalization path.
KNOWN_PLACES = [
    "Florence", "Rome", "Venice", "Milan", "Bologna", "Naples", "Padua",
    "Paris", "Lyon", "Strasbourg", "London", "Oxford", "Cambridge",
    "Manchester", "Edinburgh", "Munich", "Cologne", "Mainz", "Nuremberg",
    "Leipzig", "Vienna", "Basel", "Geneva", "Amsterdam", "Leiden",
    "Brussels", "Antwerp", "Madrid", "Seville", "Lisbon", "Copenhagen",
    "Stockholm", "Prague", "Warsaw", "New York", "Boston", "Washington",
    "Chicago", "Los Angeles", "Philadelphia", "New Haven", "Toronto",
    "Buenos Aires", "Tokyo", "Sydney", "Firenze", "Venezia", "Wien",
]
FAKE_PLACES = ["Atlantis", "Camelot", "El Dorado", "Shangri-La"]
PRINT_PLACES = ["Florence", "Venice", "Rome", "Mainz", "Nuremberg", "Paris"]


@dataclass(frozen=True)
class SynthConfig:
    n_copies: int = 200
    max_provenances: int = 10
    n_editions: int = 3
    seed: int = 1481
    missing_year_rate: float = 0.15
    approx_rate: float = 0.2
    unresolved_place_rate: float = 0.08
    missing_place_rate: float = 0.06
    backward_year_rate: float = 0.1
    fixed_provenances: Optional[int] = None  # exact block count when set
    latest_year: int = 2020


def synth_document(cfg: SynthConfig = SynthConfig()) -> dict:
    """A seeded ingest document with the configured imperfection rates."""
    rng = random.Random(cfg.seed)
    editions = []
    for i in range(cfg.n_editions):
        editions.append({
            "istc": f"is{i:08d}",
            "title": f"Synthetic edition {i}",
            "print_place": rng.choice(PRINT_PLACES),
            "print_year": rng.randint(1460, 1500),
        })

    copies = []
    for c in range(cfg.n_copies):
        edition = rng.choice(editions)
        n_blocks = cfg.fixed_provenances if cfg.fixed_provenances is not None \
            else rng.randint(1, cfg.max_provenances)
        blocks = []
        year = edition["print_year"]
        for _ in range(n_blocks):
            stay = rng.randint(0, 60)
            start = year
            end = min(start + stay, cfg.latest_year)
            if rng.random() < cfg.backward_year_rate:
                # emulate the recorded-year anomalies seen in catalog data
                start, end = end, start
            block: dict = {}
            if rng.random() >= cfg.missing_year_rate:
                block["start_year"] = start
                if rng.random() < cfg.approx_rate:
                    block["start_quality"] = "approx"
            if rng.random() >= cfg.missing_year_rate:
                block["end_year"] = end
                if rng.random() < cfg.approx_rate:
                    block["end_quality"] = "approx"
            roll = rng.random()
            if roll < cfg.missing_place_rate:
                pass
            elif roll < cfg.missing_place_rate + cfg.unresolved_place_rate:
                block["place"] = rng.choice(FAKE_PLACES)
            else:
                block["place"] = rng.choice(KNOWN_PLACES)
                if rng.random() < cfg.approx_rate:
                    block["place_quality"] = "approx"
            if rng.random() < 0.3:
                block["evidence"] = f"synthetic evidence {rng.randint(0, 9999)}"
            blocks.append(block)
            year = min(max(start, end) + rng.randint(0, 40), cfg.latest_year)
        mei_id = f"SYN{c:05d}"
        copies.append({
            "mei_id": mei_id,
            "istc": edition["istc"],
            "mei_url": f"https://example.org/mei/{mei_id}",
            "provenances": blocks,
        })

    return {"editions": editions, "copies": copies}


def synth_dataset(cfg: SynthConfig = SynthConfig(),
                  gaz: Optional[Gazetteer] = None) -> Dataset:
    """Generate, ingest and assemble a synthetic dataset in one step."""
    import json

    if gaz is None:
        gaz = builtin_gazetteer()
    editions, copies, _ = parse_dataset(json.dumps(synth_document(cfg)), gaz)
    return build_dataset(editions, copies)
