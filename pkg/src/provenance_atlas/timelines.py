"""Server-side animation schedules for map playback.

Pacing is order-driven: every mappable transfer gets the same fixed duration
and plays in order-statistic order, because recorded years are too unreliable
to drive timing. Computing schedules here keeps any client replaying the
identical animation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .dataset import Dataset
from .queries import NotFoundError

DEFAULT_SEGMENT_MS = 1500


class AnimationMode(enum.Enum):
    ALL_AT_ONCE = "all_at_once"
    ONE_BY_ONE = "one_by_one"


class NoMappablePathError(ValueError):
    """A requested copy has no transfer that can be drawn on the map."""


@dataclass(frozen=True)
class TimelineSegment:
    from_lat: float
    from_lon: float
    to_lat: float
    to_lon: float
    start_ms: int
    duration_ms: int
    j: int  # order statistic of the underlying transfer


@dataclass(frozen=True)
class TimelineTrack:
    mei_id: str
    color_index: int
    segments: tuple[TimelineSegment, ...]

    @property
    def start_ms(self) -> int:
        return self.segments[0].start_ms

    @property
    def end_ms(self) -> int:
        last = self.segments[-1]
        return last.start_ms + last.duration_ms


@dataclass(frozen=True)
class AnimationTimeline:
    mode: AnimationMode
    tracks: tuple[TimelineTrack, ...]
    total_ms: int
    skipped: tuple[tuple[str, int], ...]  # unmappable transfers left out


def build_animation_timeline(
    dataset: Dataset,
    copy_ids: list[str],
    mode: AnimationMode,
    segment_ms: int = DEFAULT_SEGMENT_MS,
) -> AnimationTimeline:
    """Schedule the selected copies' movements in one of the two play modes.

    ALL_AT_ONCE starts every track at 0 and the total is the longest track;
    ONE_BY_ONE chains tracks back to back with one distinct color index each.
    Unmappable transfers are skipped and listed; a copy with nothing mappable
    at all is an error.
    """
    tracks: list[TimelineTrack] = []
    skipped: list[tuple[str, int]] = []
    offset = 0
    for color_index, mei_id in enumerate(copy_ids):
        if dataset.copy(mei_id) is None:
            raise NotFoundError(f"NOT_FOUND: no copy {mei_id!r}")
        mappable = []
        for t in dataset.transfers_of(mei_id):
            if t.mappable:
                mappable.append(t)
            else:
                skipped.append((mei_id, t.order_index))
        if not mappable:
            raise NoMappablePathError(f"NO_MAPPABLE_PATH: copy {mei_id!r}")
        start = offset if mode is AnimationMode.ONE_BY_ONE else 0
        segments = []
        for k, t in enumerate(mappable):
            segments.append(TimelineSegment(
                from_lat=t.from_geo.lat, from_lon=t.from_geo.lon,
                to_lat=t.to_geo.lat, to_lon=t.to_geo.lon,
                start_ms=start + k * segment_ms,
                duration_ms=segment_ms,
                j=t.order_index,
            ))
        track = TimelineTrack(mei_id=mei_id, color_index=color_index,
                              segments=tuple(segments))
        tracks.append(track)
        offset = track.end_ms

    total = 0
    if tracks:
        total = max(t.end_ms for t in tracks) if mode is AnimationMode.ALL_AT_ONCE \
            else tracks[-1].end_ms
    return AnimationTimeline(
        mode=mode,
        tracks=tuple(tracks),
        total_ms=total,
        skipped=tuple(skipped),
    )
