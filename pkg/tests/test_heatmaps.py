import json
from collections import Counter

import pytest

from provenance_atlas.dataset import build_dataset
from provenance_atlas.heatmaps import (
    UNKNOWN,
    GridKind,
    GridOrdering,
    InvalidBucketError,
    copy_summary,
    flatten_transfers,
    location_heatmap,
    od_matrix,
    time_heatmap,
)
from provenance_atlas.ingest import parse_dataset
from provenance_atlas.synth import SynthConfig, synth_dataset, synth_document


def brute_od_counts(dataset):
    """Count OD pairs straight off consecutive provenance blocks."""
    counts = Counter()
    for c in dataset.copies:
        for here, there in zip(c.provenances, c.provenances[1:]):
            origin = here.geo.country_code if here.geo else UNKNOWN
            destination = there.geo.country_code if there.geo else UNKNOWN
            counts[(origin, destination)] += 1
    return counts


class TestFlatten:
    def test_two_copies_flatten_to_three(self, gaz):
        doc = {"editions": [], "copies": [
            {"mei_id": "P", "istc": "x", "provenances": [{"place": "Rome"}] * 3},
            {"mei_id": "Q", "istc": "x", "provenances": [{"place": "Rome"}] * 2},
        ]}
        editions, copies, _ = parse_dataset(json.dumps(doc), gaz)
        assert len(flatten_transfers(build_dataset(editions, copies))) == 3

    def test_twenty_copies_of_five_blocks_flatten_to_eighty(self, gaz):
        cfg = SynthConfig(n_copies=20, fixed_provenances=5, seed=3)
        doc = synth_document(cfg)
        expected = sum(len(c["provenances"]) - 1 for c in doc["copies"])
        assert expected == 80
        dataset = synth_dataset(cfg, gaz)
        assert len(flatten_transfers(dataset)) == 80

    def test_flattening_is_lossless(self, small_dataset):
        flat = flatten_transfers(small_dataset)
        keys = [(t.copy_id, t.order_index) for t in flat]
        assert len(set(keys)) == len(keys)
        regrouped: dict[str, list] = {}
        for t in flat:
            regrouped.setdefault(t.copy_id, []).append(t)
        for copy in small_dataset.copies:
            expected = list(small_dataset.transfers_of(copy.mei_id))
            assert sorted(regrouped.get(copy.mei_id, []),
                          key=lambda t: t.order_index) == expected


class TestOdMatrix:
    def test_cells_match_brute_force(self, small_dataset):
        grid = od_matrix(flatten_transfers(small_dataset), GridOrdering.ALPHABETICAL)
        brute = brute_od_counts(small_dataset)
        for i, row in enumerate(grid.row_labels):
            for j, col in enumerate(grid.col_labels):
                assert grid.counts[i][j] == brute.get((row, col), 0)

    def test_known_fixture_cells(self, small_dataset):
        grid = od_matrix(flatten_transfers(small_dataset), GridOrdering.ALPHABETICAL)
        assert grid.row_labels == ("??", "AT", "DE", "FR", "GB", "IT", "US")
        assert grid.cell("IT", "IT") == 2
        assert grid.cell("IT", "DE") == 2
        assert grid.cell("IT", "??") == 2
        assert grid.cell("??", "IT") == 1
        assert grid.cell("FR", "GB") == 1
        assert grid.cell("GB", "US") == 1
        assert grid.cell("IT", "US") == 1
        assert grid.cell("IT", "AT") == 1

    def test_simple_three_transfer_counts(self, gaz):
        doc = {"editions": [], "copies": [
            {"mei_id": "P", "istc": "x", "provenances": [
                {"place": "Rome"}, {"place": "Florence"}, {"place": "Venice"},
                {"place": "Paris"}]},
        ]}
        editions, copies, _ = parse_dataset(json.dumps(doc), gaz)
        grid = od_matrix(flatten_transfers(build_dataset(editions, copies)),
                         GridOrdering.ALPHABETICAL)
        assert grid.cell("IT", "IT") == 2
        assert grid.cell("IT", "FR") == 1
        assert grid.grand_total == 3

    def test_grand_total_equals_transfer_count(self, small_dataset, corpus):
        for ds in (small_dataset, corpus):
            flat = flatten_transfers(ds)
            assert od_matrix(flat).grand_total == len(flat)

    def test_empty_transfer_list_gives_empty_grid(self):
        grid = od_matrix([])
        assert grid.row_labels == () and grid.col_labels == () and grid.counts == ()

    def test_frequency_row_marginals_non_increasing(self, small_dataset, corpus):
        for ds in (small_dataset, corpus):
            grid = od_matrix(flatten_transfers(ds), GridOrdering.FREQUENCY)
            sums = [sum(row) for row in grid.counts]
            assert sums == sorted(sums, reverse=True)

    def test_frequency_tie_break_alphabetical(self, small_dataset):
        grid = od_matrix(flatten_transfers(small_dataset), GridOrdering.FREQUENCY)
        assert grid.row_labels == ("IT", "??", "FR", "GB", "AT", "DE", "US")
        assert grid.col_labels == ("IT", "??", "DE", "US", "AT", "GB", "FR")

    def test_frequency_is_permutation_of_alphabetical(self, corpus):
        flat = flatten_transfers(corpus)
        freq = od_matrix(flat, GridOrdering.FREQUENCY)
        alpha = od_matrix(flat, GridOrdering.ALPHABETICAL)
        assert sorted(freq.row_labels) == list(alpha.row_labels)
        assert sorted(freq.col_labels) == list(alpha.col_labels)
        for row in alpha.row_labels:
            for col in alpha.col_labels:
                assert freq.cell(row, col) == alpha.cell(row, col)

    def test_reproducible_bit_exact(self, corpus):
        flat = flatten_transfers(corpus)
        assert od_matrix(flat, GridOrdering.FREQUENCY) == \
            od_matrix(flat, GridOrdering.FREQUENCY)


def brute_bucket_hits(span, starts, width):
    """Independent interval-overlap statement for one stay."""
    if span is None:
        return []
    lo, hi = min(span), max(span)
    return [k for k, b in enumerate(starts)
            if not (hi < b or lo > b + width - 1)]


class TestTimeHeatmap:
    def test_example_stay_touches_two_buckets(self, gaz):
        doc = {"editions": [{"istc": "x", "title": "", "print_place": "Florence",
                             "print_year": 1481}],
               "copies": [{"mei_id": "P", "istc": "x", "provenances": [
                   {"start_year": 1481, "end_year": 1500, "place": "Florence"},
               ]}]}
        editions, copies, _ = parse_dataset(json.dumps(doc), gaz)
        grid = time_heatmap(build_dataset(editions, copies), 25, current_year=2026)
        assert grid.col_labels[0] == "1475-1499"
        row = dict(zip(grid.col_labels, grid.counts[0]))
        hit = {label for label, count in row.items() if count}
        assert hit == {"1475-1499", "1500-1524"}

    def test_undated_provenance_counts_only_undated(self, small_dataset):
        grid = time_heatmap(small_dataset, 25, current_year=2026)
        row_c = dict(zip(grid.col_labels, grid.counts[grid.row_labels.index("C")]))
        assert row_c["undated"] == 1  # London stay has no years at all

    def test_row_sums_at_least_block_count(self, corpus):
        grid = time_heatmap(corpus, 25, current_year=2026)
        for copy, row in zip(corpus.copies, grid.counts):
            assert sum(row) >= copy.n_provenances

    def test_single_bucket_fit_gives_equality(self, gaz):
        doc = {"editions": [{"istc": "x", "title": "", "print_place": "Rome",
                             "print_year": 1481}],
               "copies": [{"mei_id": "P", "istc": "x", "provenances": [
                   {"start_year": 1481, "end_year": 1482, "place": "Rome"},
                   {"start_year": 1490, "end_year": 1495, "place": "Rome"},
               ]}]}
        editions, copies, _ = parse_dataset(json.dumps(doc), gaz)
        grid = time_heatmap(build_dataset(editions, copies), 25, current_year=2026)
        assert grid.row_sum("P") == 2  # both stays inside 1475-1499

    def test_matches_bucket_overlap_oracle(self, corpus):
        width = 25
        grid = time_heatmap(corpus, width, current_year=2026)
        starts = [int(label.split("-")[0]) for label in grid.col_labels[:-1]]
        for copy, row in zip(corpus.copies, grid.counts):
            expected = [0] * (len(starts) + 1)
            for p in copy.provenances:
                years = [y for y in (p.start_year, p.end_year) if y is not None]
                span = (min(years), max(years)) if years else None
                if span is None:
                    expected[-1] += 1
                for k in brute_bucket_hits(span, starts, width):
                    expected[k] += 1
            assert list(row) == expected

    def test_undated_column_counts_fully_undated(self, corpus):
        grid = time_heatmap(corpus, 25, current_year=2026)
        undated_total = sum(row[-1] for row in grid.counts)
        expected = sum(
            1 for c in corpus.copies for p in c.provenances
            if p.start_year is None and p.end_year is None)
        assert undated_total == expected

    def test_bucket_width_below_one_rejected(self, small_dataset):
        with pytest.raises(InvalidBucketError):
            time_heatmap(small_dataset, 0)

    def test_rows_follow_dataset_order(self, small_dataset):
        grid = time_heatmap(small_dataset, 25, current_year=2026)
        assert grid.row_labels == tuple(c.mei_id for c in small_dataset.copies)
        assert grid.kind is GridKind.COPY_TIME
        assert grid.ordering is GridOrdering.DATASET


class TestLocationHeatmap:
    def test_stay_counts_via_gazetteer(self, small_dataset):
        grid = location_heatmap(small_dataset)
        row_a = dict(zip(grid.col_labels, grid.counts[grid.row_labels.index("A")]))
        assert row_a["IT"] == 2 and row_a["DE"] == 1

    def test_unresolved_stays_in_unknown_column(self, gaz):
        doc = {"editions": [], "copies": [{"mei_id": "P", "istc": "x", "provenances": [
            {"place": "Nowhere1"}, {"place": "Nowhere2"}]}]}
        editions, copies, _ = parse_dataset(json.dumps(doc), gaz)
        grid = location_heatmap(build_dataset(editions, copies))
        assert grid.cell("P", UNKNOWN) == 2

    def test_row_sums_equal_block_counts(self, small_dataset, corpus):
        for ds in (small_dataset, corpus):
            grid = location_heatmap(ds)
            for copy, row in zip(ds.copies, grid.counts):
                assert sum(row) == copy.n_provenances


class TestCopySummary:
    def test_spokes_mirror_completeness_in_order(self, small_dataset):
        summary = copy_summary(small_dataset.copy("E"))
        assert summary.n_provenances == 3
        assert summary.completeness_spokes == (
            (1, "accurate", "accurate", "accurate"),
            (2, "missing", "approximate", "missing"),
            (3, "accurate", "accurate", "accurate"),
        )

    def test_highlight_matches_active_od_query(self, small_dataset):
        summary = copy_summary(small_dataset.copy("A"), active_query=("IT", "DE"))
        assert summary.highlight == {2}
        summary_b = copy_summary(small_dataset.copy("B"), active_query=("IT", "DE"))
        assert summary_b.highlight == {1}

    def test_no_active_query_no_highlight(self, small_dataset):
        assert copy_summary(small_dataset.copy("A")).highlight == frozenset()

    def test_highlight_subset_of_transfer_indexes(self, corpus):
        for copy in corpus.copies[:20]:
            summary = copy_summary(copy, active_query=("IT", "IT"))
            assert summary.highlight <= set(range(1, copy.n_provenances))

    def test_journey_nodes_count(self, small_dataset):
        summary = copy_summary(small_dataset.copy("A"))
        assert len(summary.journey_nodes) == 3
