import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from provenance_atlas.bundling import (
    STRAIGHT,
    BundleParams,
    DegenerateSegmentError,
    InvalidLevelError,
    Projection,
    Segment,
    bundle,
    bundle_at_level,
    compatibility,
    point_along,
    preset_params,
    segments_from_transfers,
    straight_polylines,
)
from provenance_atlas.core import GeoPoint
from provenance_atlas.heatmaps import flatten_transfers

# Canonical two-parallel-edges fixture: length 0.5, vertical gap 0.2
# (compatibility 0.714, above the 0.6 preset threshold).
PARALLEL_LEN = 0.5
PARALLEL_GAP = 0.2


def parallel_fixture(length=PARALLEL_LEN, gap=PARALLEL_GAP):
    x0, x1 = 0.5 - length / 2, 0.5 + length / 2
    return [
        Segment(id=("top", 1), a=(x0, 0.5 + gap / 2), b=(x1, 0.5 + gap / 2)),
        Segment(id=("bot", 1), a=(x0, 0.5 - gap / 2), b=(x1, 0.5 - gap / 2)),
    ]


def polyline_midpoint(points):
    """Arc-length midpoint, computed with plain python (oracle-side helper)."""
    lens = [math.dist(points[i], points[i + 1]) for i in range(len(points) - 1)]
    total = sum(lens)
    target = total / 2.0
    walked = 0.0
    for i, seg_len in enumerate(lens):
        if walked + seg_len >= target:
            t = (target - walked) / seg_len if seg_len else 0.0
            return (points[i][0] + t * (points[i + 1][0] - points[i][0]),
                    points[i][1] + t * (points[i + 1][1] - points[i][1]))
        walked += seg_len
    return points[-1]


def midpoint_separation(polylines):
    top = polyline_midpoint(polylines[0].points)
    bottom = polyline_midpoint(polylines[1].points)
    return math.dist(top, bottom)


def reference_pair_simulation(length, gap, stiffness, step, *,
                              n_interior=3, iterations=20):
    """Small-step reference bundling of two aligned parallel edges.

    Independent of the production implementation: plain lists, one cycle,
    fixed subdivision count, synchronous updates of the same force law
    (neighbor springs with kp = K/(len*n_interior) plus unit attraction).
    """
    x0 = 0.5 - length / 2
    ys = (0.5 + gap / 2, 0.5 - gap / 2)
    polys = []
    for y in ys:
        polys.append([
            (x0 + length * t / (n_interior + 1), y)
            for t in range(n_interior + 2)
        ])
    kp = stiffness / (length * n_interior)
    for _ in range(iterations):
        snapshot = [list(p) for p in polys]
        for e in (0, 1):
            mine, other = snapshot[e], snapshot[1 - e]
            for i in range(1, n_interior + 1):
                fx = kp * (mine[i - 1][0] + mine[i + 1][0] - 2 * mine[i][0])
                fy = kp * (mine[i - 1][1] + mine[i + 1][1] - 2 * mine[i][1])
                dx = other[i][0] - mine[i][0]
                dy = other[i][1] - mine[i][1]
                dist = math.hypot(dx, dy)
                if dist > 1e-12:
                    fx += dx / dist
                    fy += dy / dist
                polys[e][i] = (mine[i][0] + step * fx, mine[i][1] + step * fy)
    separation = math.dist(polyline_midpoint(polys[0]), polyline_midpoint(polys[1]))
    return polys, separation


class TestProjection:
    def test_round_trip_below_1e9(self):
        rng = random.Random(42)
        points = [GeoPoint(rng.uniform(-89, 89), rng.uniform(-179, 179), "IT")
                  for _ in range(100)]
        proj = Projection.fit(points)
        for g in points:
            lat, lon = proj.unproject(proj.project(g))
            assert abs(lat - g.lat) < 1e-9
            assert abs(lon - g.lon) < 1e-9

    def test_symmetric_bbox_center_maps_to_scene_center(self):
        pts = [GeoPoint(10, 20, "IT"), GeoPoint(-10, -20, "IT")]
        proj = Projection.fit(pts)
        assert proj.project(GeoPoint(0, 0, "IT")) == (0.5, 0.5)

    def test_florence_projects_to_recomputed_affine_point(self):
        pts = [GeoPoint(43.77, 11.26, "IT"), GeoPoint(41.89, 12.48, "IT"),
               GeoPoint(52.52, 13.41, "DE")]
        proj = Projection.fit(pts)
        # Recompute the stated affine mapping by hand.
        lon_mid = (13.41 + 11.26) / 2
        lat_mid = (52.52 + 41.89) / 2
        scale = 1.0 / max(13.41 - 11.26, 52.52 - 41.89)
        expected = (0.5 + (11.26 - lon_mid) * scale, 0.5 + (43.77 - lat_mid) * scale)
        assert proj.project(pts[0]) == expected
        assert proj.project(pts[0]) == Projection.fit(pts).project(pts[0])

    def test_degenerate_single_point_scene(self):
        proj = Projection.fit([GeoPoint(43.77, 11.26, "IT")])
        lat, lon = proj.unproject(proj.project(GeoPoint(43.77, 11.26, "IT")))
        assert (round(lat, 9), round(lon, 9)) == (43.77, 11.26)


class TestCompatibility:
    def test_identical_segments_fully_compatible(self):
        e = Segment(("a", 1), (0.1, 0.2), (0.7, 0.4))
        assert compatibility(e, e) == pytest.approx(1.0)

    def test_perpendicular_crossing_at_midpoints_is_zero(self):
        e1 = Segment(("a", 1), (0.3, 0.5), (0.7, 0.5))
        e2 = Segment(("b", 1), (0.5, 0.3), (0.5, 0.7))
        assert compatibility(e1, e2) == pytest.approx(0.0)

    def test_parallel_offset_ten_percent_matches_hand_value(self):
        # Equal length 0.4, perpendicular offset 0.04 (10% of length):
        # angle=1, scale=1, visibility=1, position = 0.4/(0.4+0.04) = 1/1.1.
        e1 = Segment(("a", 1), (0.3, 0.5), (0.7, 0.5))
        e2 = Segment(("b", 1), (0.3, 0.54), (0.7, 0.54))
        value = compatibility(e1, e2)
        assert value == pytest.approx(1 / 1.1, rel=1e-12)
        assert 0.5 < value < 1.0

    def test_canonical_fixture_compatibility(self):
        top, bottom = parallel_fixture()
        assert compatibility(top, bottom) == pytest.approx(
            PARALLEL_LEN / (PARALLEL_LEN + PARALLEL_GAP), rel=1e-12)

    def test_degenerate_segment_rejected(self):
        e1 = Segment(("a", 1), (0.1, 0.1), (0.1, 0.1))
        e2 = Segment(("b", 1), (0.2, 0.2), (0.6, 0.6))
        with pytest.raises(DegenerateSegmentError):
            compatibility(e1, e2)

    @given(st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=8, max_size=8))
    def test_symmetry_and_range(self, coords):
        e1 = Segment(("a", 1), (coords[0], coords[1]), (coords[2], coords[3]))
        e2 = Segment(("b", 1), (coords[4], coords[5]), (coords[6], coords[7]))
        if e1.a == e1.b or e2.a == e2.b:
            return
        c12 = compatibility(e1, e2)
        assert compatibility(e2, e1) == c12
        assert 0.0 <= c12 <= 1.0


class TestPresets:
    def test_level_zero_is_straight_marker(self):
        assert preset_params(0) is STRAIGHT

    def test_stiffness_strictly_decreasing(self):
        ks = [preset_params(level).stiffness for level in range(1, 5)]
        assert ks == sorted(ks, reverse=True)
        assert preset_params(4).stiffness < preset_params(1).stiffness

    @pytest.mark.parametrize("level", [-1, 5, 7, 2.5, "3", True])
    def test_out_of_range_levels_rejected(self, level):
        with pytest.raises(InvalidLevelError):
            preset_params(level)


class TestBundle:
    def test_level_zero_outputs_exact_chords(self):
        fixture = parallel_fixture()
        for poly, seg in zip(bundle_at_level(fixture, 0), fixture):
            assert poly.points == (seg.a, seg.b)

    def test_endpoints_fixed_bitwise_at_all_levels(self):
        fixture = parallel_fixture()
        for level in range(5):
            for poly, seg in zip(bundle_at_level(fixture, level), fixture):
                assert poly.points[0] == seg.a
                assert poly.points[-1] == seg.b

    def test_point_count_matches_final_subdivision(self):
        params = preset_params(3)
        # 6 cycles of doubling from 1 interior point: 32 interior points.
        polylines = bundle(parallel_fixture(), params)
        assert all(len(p.points) == 34 for p in polylines)

    def test_single_isolated_edge_stays_straight(self):
        seg = Segment(("solo", 1), (0.2, 0.3), (0.8, 0.6))
        (poly,) = bundle_at_level([seg], 4)
        length = math.dist(seg.a, seg.b)
        chord = np.array([seg.a, seg.b])
        pts = np.asarray(poly.points)
        direction = (chord[1] - chord[0]) / length
        rel = pts - chord[0]
        off_axis = rel[:, 0] * direction[1] - rel[:, 1] * direction[0]
        assert np.max(np.abs(off_axis)) < 1e-6 * length

    def test_two_parallel_edges_mirror_symmetric_and_closer(self):
        fixture = parallel_fixture()
        polylines = bundle_at_level(fixture, 3)
        top = np.asarray(polylines[0].points)
        bottom = np.asarray(polylines[1].points)
        # Mirror symmetry about the horizontal center line y=0.5.
        assert np.allclose(top[:, 0], bottom[:, 0], atol=1e-9)
        assert np.allclose(top[:, 1] - 0.5, 0.5 - bottom[:, 1], atol=1e-9)
        separation = midpoint_separation(polylines)
        assert separation < PARALLEL_GAP
        # Independent small-step oracle agrees the pair must close the gap.
        _, ref_separation = reference_pair_simulation(
            PARALLEL_LEN, PARALLEL_GAP, stiffness=0.1, step=0.002)
        assert ref_separation < PARALLEL_GAP

    def test_midpoint_separation_strictly_decreasing_over_levels(self):
        fixture = parallel_fixture()
        separations = [
            midpoint_separation(bundle_at_level(fixture, level))
            for level in range(1, 5)
        ]
        assert all(a > b for a, b in zip(separations, separations[1:])), separations

    def test_reference_oracle_confirms_monotonicity_direction(self):
        # Lower stiffness must tighten the bundle in the independent
        # simulation as well (same step, 20 iterations, 3 subdivisions).
        seps = [
            reference_pair_simulation(PARALLEL_LEN, PARALLEL_GAP,
                                      stiffness=k, step=0.002)[1]
            for k in (0.8, 0.4, 0.1, 0.02)
        ]
        assert all(a > b for a, b in zip(seps, seps[1:])), seps

    def test_reference_endpoints_never_move(self):
        polys, _ = reference_pair_simulation(0.5, 0.2, stiffness=0.1, step=0.002)
        assert polys[0][0] == (0.25, 0.6) and polys[0][-1] == (0.75, 0.6)

    def test_deterministic_byte_identical(self):
        fixture = parallel_fixture()
        first = bundle_at_level(fixture, 4)
        second = bundle_at_level(fixture, 4)
        for a, b in zip(first, second):
            assert np.asarray(a.points).tobytes() == np.asarray(b.points).tobytes()

    def test_mirror_image_scene_gives_mirror_image_output(self):
        scene = [
            Segment(("a", 1), (0.2, 0.3), (0.8, 0.35)),
            Segment(("b", 1), (0.25, 0.5), (0.75, 0.45)),
            Segment(("c", 1), (0.3, 0.7), (0.7, 0.72)),
        ]
        mirrored = [
            Segment(s.id, (1.0 - s.a[0], s.a[1]), (1.0 - s.b[0], s.b[1]))
            for s in scene
        ]
        for level in (1, 3):
            out = bundle_at_level(scene, level)
            out_mirrored = bundle_at_level(mirrored, level)
            for poly, poly_m in zip(out, out_mirrored):
                pts = np.asarray(poly.points)
                pts_m = np.asarray(poly_m.points)
                assert np.allclose(1.0 - pts[:, 0], pts_m[:, 0], atol=1e-9)
                assert np.allclose(pts[:, 1], pts_m[:, 1], atol=1e-9)

    def test_polyline_never_shorter_than_chord(self):
        fixture = parallel_fixture() + [
            Segment(("c", 1), (0.1, 0.45), (0.62, 0.52)),
        ]
        for level in range(5):
            for poly, seg in zip(bundle_at_level(fixture, level), fixture):
                pts = np.asarray(poly.points)
                length = float(np.sum(np.hypot(*(np.diff(pts, axis=0).T))))
                chord = math.dist(seg.a, seg.b)
                assert length >= chord * (1 - 1e-12)

    def test_zero_length_segment_rejected(self):
        seg = Segment(("dup", 1), (0.4, 0.4), (0.4, 0.4))
        with pytest.raises(DegenerateSegmentError):
            bundle([seg], preset_params(2))

    def test_incompatible_pairs_do_not_interact(self):
        # Perpendicular cross: compatibility 0, both stay straight.
        e1 = Segment(("a", 1), (0.3, 0.5), (0.7, 0.5))
        e2 = Segment(("b", 1), (0.5, 0.3), (0.5, 0.7))
        for poly, seg in zip(bundle_at_level([e1, e2], 4), (e1, e2)):
            pts = np.asarray(poly.points)
            chord = np.linspace(seg.a, seg.b, len(pts))
            assert np.allclose(pts, chord, atol=1e-9)

    def test_empty_scene(self):
        assert bundle_at_level([], 3) == []


class TestParams:
    def test_rejects_bad_values(self):
        good = dict(cycles=6, initial_subdivisions=1, subdivision_growth=2.0,
                    initial_step=0.001, iterations_first_cycle=50,
                    iteration_decay=2 / 3, stiffness=0.1,
                    compatibility_threshold=0.6)
        BundleParams(**good)
        for key, bad in [("cycles", 0), ("initial_subdivisions", 0),
                         ("initial_step", 0.0), ("stiffness", -1.0),
                         ("compatibility_threshold", 1.5)]:
            with pytest.raises(ValueError):
                BundleParams(**{**good, key: bad})


class TestSegmentsFromTransfers:
    def test_fixture_yields_only_mappable_distinct_segments(self, small_dataset):
        transfers = flatten_transfers(small_dataset)
        geo = [p.geo for c in small_dataset.copies
               for p in c.provenances if p.geo is not None]
        segments = segments_from_transfers(transfers, Projection.fit(geo))
        # A:2, B:1, C:2, F:1, G:1 (Rome->Rome stay excluded), E/H unresolved.
        assert len(segments) == 7
        assert all(seg.a != seg.b for seg in segments)
        assert ("G", 2) in [s.id for s in segments]
        assert ("G", 1) not in [s.id for s in segments]

    def test_straight_polylines_match_segments(self, small_dataset):
        transfers = flatten_transfers(small_dataset)
        geo = [p.geo for c in small_dataset.copies
               for p in c.provenances if p.geo is not None]
        segments = segments_from_transfers(transfers, Projection.fit(geo))
        for poly, seg in zip(straight_polylines(segments), segments):
            assert poly.points == (seg.a, seg.b)
            assert poly.id == seg.id


def test_point_along_midpoint_of_straight_line():
    assert point_along([(0.0, 0.0), (1.0, 0.0)], 0.5) == (0.5, 0.0)
    assert point_along([(0.0, 0.0), (0.5, 0.0), (1.0, 0.0)], 0.5) == (0.5, 0.0)
