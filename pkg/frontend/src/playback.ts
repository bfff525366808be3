/**
 * Frame sampling over an animation timeline: which markers are moving at a
 * given instant, where they are, and which tracks have already finished
 * (their trails stay on the map in their track color).
 */

import type { TimelinePayload, TimelineTrackPayload } from "./types.js";

export interface MovingMarker {
  meiId: string;
  colorIndex: number;
  /** Current interpolated position, [lat, lon]. */
  position: [number, number];
  j: number;
}

export interface FrameView {
  moving: MovingMarker[];
  finishedTrackIds: string[];
  done: boolean;
}

function trackEnd(track: TimelineTrackPayload): number {
  const last = track.segments[track.segments.length - 1];
  return last ? last.start_ms + last.duration_ms : 0;
}

function interpolate(track: TimelineTrackPayload, elapsedMs: number): MovingMarker | null {
  for (const segment of track.segments) {
    const end = segment.start_ms + segment.duration_ms;
    if (elapsedMs >= segment.start_ms && elapsedMs < end) {
      const t = (elapsedMs - segment.start_ms) / segment.duration_ms;
      return {
        meiId: track.mei_id,
        colorIndex: track.color_index,
        position: [
          segment.from[0] + t * (segment.to[0] - segment.from[0]),
          segment.from[1] + t * (segment.to[1] - segment.from[1]),
        ],
        j: segment.j,
      };
    }
  }
  return null;
}

export function frameAt(timeline: TimelinePayload, elapsedMs: number): FrameView {
  const clamped = Math.max(0, Math.min(elapsedMs, timeline.total_ms));
  const moving: MovingMarker[] = [];
  const finished: string[] = [];
  for (const track of timeline.tracks) {
    const marker = interpolate(track, clamped);
    if (marker) {
      moving.push(marker);
    } else if (clamped >= trackEnd(track)) {
      finished.push(track.mei_id);
    }
  }
  return {
    moving,
    finishedTrackIds: finished,
    done: clamped >= timeline.total_ms,
  };
}

/** Sample a whole run at a fixed cadence (diagnostics and tests). */
export function sampleFrames(timeline: TimelinePayload, stepMs: number): FrameView[] {
  const frames: FrameView[] = [];
  for (let t = 0; t <= timeline.total_ms; t += stepMs) {
    frames.push(frameAt(timeline, t));
  }
  return frames;
}
