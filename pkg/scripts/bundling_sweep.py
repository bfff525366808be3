#!/usr/bin/env python3
"""Sweep bundling presets over the two-parallel-edges fixture.

Prints the midpoint separation per preset level for a grid of fixture
geometries. Used to pick preset parameters that keep the level sweep
strictly monotone with a comfortable margin.
"""

from __future__ import annotations

import argparse

from provenance_atlas.bundling import (
    Segment,
    bundle_at_level,
    compatibility,
    point_along,
)


def parallel_fixture(length: float, gap: float) -> list[Segment]:
    x0, x1 = 0.5 - length / 2, 0.5 + length / 2
    hi, lo = 0.5 + gap / 2, 0.5 - gap / 2
    return [
        Segment(id=("top", 1), a=(x0, hi), b=(x1, hi)),
        Segment(id=("bottom", 1), a=(x0, lo), b=(x1, lo)),
    ]


def midpoint_separation(polylines) -> float:
    top = point_along(polylines[0].points, 0.5)
    bottom = point_along(polylines[1].points, 0.5)
    return ((top[0] - bottom[0]) ** 2 + (top[1] - bottom[1]) ** 2) ** 0.5


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--lengths", type=float, nargs="+", default=[0.3, 0.5, 0.7])
    parser.add_argument("--gaps", type=float, nargs="+", default=[0.1, 0.15, 0.2])
    args = parser.parse_args()

    for length in args.lengths:
        for gap in args.gaps:
            fixture = parallel_fixture(length, gap)
            compat = compatibility(fixture[0], fixture[1])
            seps = []
            for level in range(5):
                polylines = bundle_at_level(fixture, level)
                seps.append(midpoint_separation(polylines))
            monotone = all(a > b for a, b in zip(seps[1:], seps[2:]))
            print(f"L={length:4.2f} gap={gap:4.2f} compat={compat:5.3f} "
                  + " ".join(f"s{lvl}={s:8.5f}" for lvl, s in enumerate(seps))
                  + f"  strict_1to4={monotone}")


if __name__ == "__main__":
    main()
