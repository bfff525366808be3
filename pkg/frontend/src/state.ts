/**
 * Explorer UI state as pure reducers: replaying the same action log from the
 * initial state always reproduces the same final state. Invariants held by
 * construction: selected ids stay inside the last query result, the bundling
 * level stays in 0..4, and playback never runs past the timeline total.
 */

import type { BundlingLevel, QueryResultPayload, TimelinePayload } from "./types.js";

export type QueryDescriptor =
  | { kind: "od"; from: string; to: string }
  | { kind: "journey"; origin: string; destination: string }
  | { kind: "id"; id: string };

export type PlaybackStatus = "idle" | "playing" | "paused" | "stopped";

export interface PlaybackState {
  status: PlaybackStatus;
  elapsedMs: number;
  timeline: TimelinePayload | null;
}

export interface HoveredCell {
  grid: string;
  row: string;
  col: string;
  count: number;
}

export interface UiState {
  activeQuery: QueryDescriptor | null;
  lastResult: QueryResultPayload | null;
  selected: string[];
  bundlingLevel: BundlingLevel;
  animationMode: "all_at_once" | "one_by_one";
  playback: PlaybackState;
  hoveredCell: HoveredCell | null;
}

export const initialState: UiState = {
  activeQuery: null,
  lastResult: null,
  selected: [],
  bundlingLevel: 0,
  animationMode: "all_at_once",
  playback: { status: "idle", elapsedMs: 0, timeline: null },
  hoveredCell: null,
};

export type Action =
  | { type: "query_resolved"; query: QueryDescriptor; result: QueryResultPayload }
  | { type: "toggle_select"; meiId: string }
  | { type: "clear_selection" }
  | { type: "set_bundling_level"; level: BundlingLevel }
  | { type: "set_animation_mode"; mode: "all_at_once" | "one_by_one" }
  | { type: "hover_cell"; cell: HoveredCell | null }
  | { type: "play"; timeline: TimelinePayload }
  | { type: "tick"; deltaMs: number }
  | { type: "pause" }
  | { type: "resume" }
  | { type: "stop" };

export function reduce(state: UiState, action: Action): UiState {
  switch (action.type) {
    case "query_resolved": {
      const ids = new Set(action.result.copy_ids);
      return {
        ...state,
        activeQuery: action.query,
        lastResult: action.result,
        selected: state.selected.filter((id) => ids.has(id)),
      };
    }
    case "toggle_select": {
      if (!state.lastResult || !state.lastResult.copy_ids.includes(action.meiId)) {
        return state; // selection must stay inside the last result
      }
      const selected = state.selected.includes(action.meiId)
        ? state.selected.filter((id) => id !== action.meiId)
        : [...state.selected, action.meiId];
      return { ...state, selected };
    }
    case "clear_selection":
      return { ...state, selected: [] };
    case "set_bundling_level":
      if (action.level < 0 || action.level > 4) return state;
      return { ...state, bundlingLevel: action.level };
    case "set_animation_mode":
      return { ...state, animationMode: action.mode };
    case "hover_cell":
      return { ...state, hoveredCell: action.cell };
    case "play":
      return {
        ...state,
        playback: { status: "playing", elapsedMs: 0, timeline: action.timeline },
      };
    case "tick": {
      const { playback } = state;
      if (playback.status !== "playing" || !playback.timeline) return state;
      const elapsed = Math.min(
        playback.elapsedMs + Math.max(0, action.deltaMs),
        playback.timeline.total_ms,
      );
      const finished = elapsed >= playback.timeline.total_ms;
      return {
        ...state,
        playback: {
          ...playback,
          elapsedMs: elapsed,
          status: finished ? "stopped" : "playing",
        },
      };
    }
    case "pause":
      if (state.playback.status !== "playing") return state;
      return { ...state, playback: { ...state.playback, status: "paused" } };
    case "resume":
      if (state.playback.status !== "paused") return state;
      return { ...state, playback: { ...state.playback, status: "playing" } };
    case "stop":
      return { ...state, playback: { ...state.playback, status: "stopped", elapsedMs: 0 } };
    default:
      return state;
  }
}

export function replay(actions: Action[], from: UiState = initialState): UiState {
  return actions.reduce(reduce, from);
}
