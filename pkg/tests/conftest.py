import copy as copymod
import json

import pytest
from hypothesis import settings

from provenance_atlas.dataset import Dataset, build_dataset
from provenance_atlas.gazetteer import builtin_gazetteer
from provenance_atlas.ingest import parse_dataset
from provenance_atlas.synth import SynthConfig, synth_dataset

settings.register_profile("suite", deadline=None)
settings.load_profile("suite")


# Hand-checked fixture. Countries: Florence/Rome/Venice=IT, Berlin/Munich=DE,
# Paris=FR, London=GB, New York=US, Vienna=AT; Atlantis/Camelot unresolved.
# 8 copies, 19 provenances, 11 transfers. OD cells: (IT,IT)=2 (one of them a
# Rome->Rome stay), (IT,DE)=2, (IT,AT)=1, (FR,GB)=1, (GB,US)=1, (IT,??)=2,
# (??,IT)=1, (IT,US)=1.
FIXTURE_DOC = {
    "editions": [
        {"istc": "ic00001000", "title": "Test census edition",
         "print_place": "Florence", "print_year": 1481},
    ],
    "copies": [
        {"mei_id": "A", "istc": "ic00001000",
         "mei_url": "https://example.org/mei/A",
         "provenances": [
             {"start_year": 1481, "end_year": 1500, "place": "Florence"},
             {"start_year": 1520, "end_year": 1600, "place": "Rome"},
             {"start_year": 1620, "end_year": 1700, "place": "Berlin"},
         ]},
        {"mei_id": "B", "istc": "ic00001000",
         "provenances": [
             {"start_year": 1481, "end_year": 1600, "place": "Venice"},
             {"start_year": 1550, "end_year": 1700, "place": "Munich"},
         ]},
        {"mei_id": "C", "istc": "ic00001000",
         "provenances": [
             {"start_year": 1490, "end_year": 1520, "place": "Paris"},
             {"place": "London"},
             {"start_year": 1900, "end_year": 1950, "place": "New York"},
         ]},
        {"mei_id": "D", "istc": "ic00001000",
         "provenances": [
             {"start_year": 1481, "place": "Florence"},
         ]},
        {"mei_id": "E", "istc": "ic00001000",
         "provenances": [
             {"start_year": 1481, "end_year": 1500, "place": "Florence"},
             {"end_year": 1600, "end_quality": "approx", "place": "Atlantis"},
             {"start_year": 1700, "end_year": 1800, "place": "Florence"},
         ]},
        {"mei_id": "F", "istc": "ic00001000",
         "provenances": [
             {"start_year": 1481, "end_year": 1500, "place": "Florence"},
             {"start_year": 1900, "end_year": 2000, "place": "New York"},
         ]},
        {"mei_id": "G", "istc": "ic00001000",
         "provenances": [
             {"start_year": 1500, "end_year": 1501, "place": "Rome"},
             {"start_year": 1502, "end_year": 1600, "place": "Rome"},
             {"start_year": 1610, "end_year": 1620, "place": "Vienna"},
         ]},
        {"mei_id": "H", "istc": "ic00001000",
         "provenances": [
             {"start_year": 1481, "end_year": 1485, "place": "Venice"},
             {"place": "Camelot"},
         ]},
    ],
}


@pytest.fixture(scope="session")
def gaz():
    return builtin_gazetteer()


@pytest.fixture()
def fixture_doc():
    return copymod.deepcopy(FIXTURE_DOC)


@pytest.fixture(scope="session")
def small_dataset(gaz) -> Dataset:
    editions, copies, report = parse_dataset(json.dumps(FIXTURE_DOC), gaz)
    assert not [f for f in report.findings if f.severity == "error"]
    return build_dataset(editions, copies)


@pytest.fixture(scope="session")
def corpus(gaz) -> Dataset:
    """Synthetic acceptance corpus: 200 copies of up to 10 provenances."""
    return synth_dataset(SynthConfig(n_copies=200, max_provenances=10, seed=1481), gaz)
