/**
 * Pure view-model builders for the four panels. Every number shown in the UI
 * comes straight from an API payload; these functions only reshape, never
 * recompute analytics.
 */

import type { FrameView } from "./playback.js";
import type { QueryDescriptor } from "./state.js";
import type {
  BundledPolylinePayload,
  CompletenessLevel,
  CopyBrief,
  CopyRecord,
  GridPayload,
  QueryResultPayload,
  TimelinePayload,
} from "./types.js";

/** Shared by the radar chart and the step-map donut glyphs. */
export const COMPLETENESS_COLORS: Record<CompletenessLevel, string> = {
  accurate: "#2a9d8f",
  approximate: "#e9c46a",
  missing: "#e76f51",
};

/** Radar radius per completeness level. */
export const COMPLETENESS_RADIUS: Record<CompletenessLevel, number> = {
  accurate: 2,
  approximate: 1,
  missing: 0,
};

const GRID_NOUN: Record<GridPayload["kind"], string> = {
  od_instances: "transfer(s)",
  copy_time: "stay(s)",
  copy_location: "stay(s)",
};

export function cellTooltip(grid: GridPayload, row: string, col: string): string {
  const count = cellCount(grid, row, col);
  if (grid.kind === "od_instances") {
    return `${row} → ${col}: ${count} ${GRID_NOUN[grid.kind]}`;
  }
  return `${row} × ${col}: ${count} ${GRID_NOUN[grid.kind]}`;
}

export function cellCount(grid: GridPayload, row: string, col: string): number {
  const r = grid.row_labels.indexOf(row);
  const c = grid.col_labels.indexOf(col);
  if (r < 0 || c < 0) return 0;
  return grid.counts[r]?.[c] ?? 0;
}

export interface HeatmapCellView {
  row: string;
  col: string;
  count: number;
  /** 0..1 share of the grid maximum, for color ramps. */
  intensity: number;
  tooltip: string;
}

export interface HeatmapView {
  kind: GridPayload["kind"];
  ordering: GridPayload["ordering"];
  rowLabels: string[];
  colLabels: string[];
  cells: HeatmapCellView[][];
}

export function heatmapView(grid: GridPayload): HeatmapView {
  const maximum = Math.max(1, ...grid.counts.map((row) => Math.max(0, ...row)));
  const cells = grid.row_labels.map((row, r) =>
    grid.col_labels.map((col, c) => {
      const count = grid.counts[r]?.[c] ?? 0;
      return {
        row,
        col,
        count,
        intensity: count / maximum,
        tooltip: cellTooltip(grid, row, col),
      };
    }),
  );
  return {
    kind: grid.kind,
    ordering: grid.ordering,
    rowLabels: [...grid.row_labels],
    colLabels: [...grid.col_labels],
    cells,
  };
}

export function queryDescription(query: QueryDescriptor): string {
  switch (query.kind) {
    case "od":
      return `Transfers ${query.from} → ${query.to}`;
    case "journey":
      return `Full journeys ${query.origin} → ${query.destination}`;
    case "id":
      return `Record ${query.id}`;
  }
}

export interface InfoPanelButton {
  meiId: string;
  anchored: boolean;
}

export interface InfoPanelView {
  description: string;
  stats: { copies: number; transfers: number; countries: number };
  buttons: InfoPanelButton[];
}

export function infoPanelView(
  query: QueryDescriptor,
  result: QueryResultPayload,
  selected: string[],
): InfoPanelView {
  return {
    description: queryDescription(query),
    stats: {
      copies: result.stats.n_copies,
      transfers: result.stats.n_matched_transfers,
      countries: result.stats.n_distinct_countries,
    },
    buttons: result.copy_ids.map((meiId) => ({
      meiId,
      anchored: selected.includes(meiId),
    })),
  };
}

export interface RadarSpokeView {
  orderIndex: number;
  axes: { attribute: "start_time" | "end_time" | "location"; level: CompletenessLevel; radius: number; color: string }[];
}

export function radarView(record: CopyRecord): RadarSpokeView[] {
  return record.summary.completeness_spokes.map(([orderIndex, start, end, location]) => ({
    orderIndex,
    axes: ([
      ["start_time", start],
      ["end_time", end],
      ["location", location],
    ] as const).map(([attribute, level]) => ({
      attribute,
      level,
      radius: COMPLETENESS_RADIUS[level],
      color: COMPLETENESS_COLORS[level],
    })),
  }));
}

export interface JourneyNodeView {
  orderIndex: number;
  place: string | null;
  years: string;
  completenessColors: [string, string, string];
  highlighted: boolean;
  hasOutgoingTransfer: boolean;
}

export function horizontalJourneyView(record: CopyRecord): JourneyNodeView[] {
  const highlight = new Set(record.summary.highlight);
  return record.journey.map((node) => {
    const p = node.provenance;
    return {
      orderIndex: p.order_index,
      place: p.place,
      years: `${p.start_year ?? "?"}–${p.end_year ?? "?"}`,
      completenessColors: [
        COMPLETENESS_COLORS[p.completeness.start_time],
        COMPLETENESS_COLORS[p.completeness.end_time],
        COMPLETENESS_COLORS[p.completeness.location],
      ],
      highlighted: node.transfer !== null && highlight.has(node.transfer.j),
      hasOutgoingTransfer: node.transfer !== null,
    };
  });
}

export interface DonutGlyphView {
  orderIndex: number;
  colors: [string, string, string];
}

export interface StepMapView {
  j: number;
  from: { place: string | null; position: [number, number] | null; donut: DonutGlyphView };
  to: { place: string | null; position: [number, number] | null; donut: DonutGlyphView };
  mappable: boolean;
  consistent: boolean;
}

export function stepMapsView(record: CopyRecord): StepMapView[] {
  const donut = (index: number): DonutGlyphView => {
    const p = record.journey[index]!.provenance;
    return {
      orderIndex: p.order_index,
      colors: [
        COMPLETENESS_COLORS[p.completeness.start_time],
        COMPLETENESS_COLORS[p.completeness.end_time],
        COMPLETENESS_COLORS[p.completeness.location],
      ],
    };
  };
  return record.journey.slice(0, -1).map((node, index) => {
    const t = node.transfer!;
    return {
      j: t.j,
      from: {
        place: record.journey[index]!.provenance.place,
        position: t.from_geo ? [t.from_geo.lat, t.from_geo.lon] : null,
        donut: donut(index),
      },
      to: {
        place: record.journey[index + 1]!.provenance.place,
        position: t.to_geo ? [t.to_geo.lat, t.to_geo.lon] : null,
        donut: donut(index + 1),
      },
      mappable: t.mappable,
      consistent: t.consistent,
    };
  });
}

export interface FullJourneyMarkerView {
  orderIndex: number;
  position: [number, number];
  /** 0..1 progression along the journey, drives the single-color gradient fill. */
  gradientFraction: number;
}

export interface MssRowView {
  meiId: string;
  meiUrl: string | null;
  radar: RadarSpokeView[];
  horizontalJourney: JourneyNodeView[];
  fullJourneyMarkers: FullJourneyMarkerView[];
  stepMaps: StepMapView[];
  noMappablePath: boolean;
}

export function mssRowView(record: CopyRecord): MssRowView {
  const located = record.journey.filter((node) => node.provenance.geo !== null);
  const n = record.journey.length;
  const markers = located.map((node) => ({
    orderIndex: node.provenance.order_index,
    position: [node.provenance.geo!.lat, node.provenance.geo!.lon] as [number, number],
    gradientFraction: n > 1 ? (node.provenance.order_index - 1) / (n - 1) : 0,
  }));
  return {
    meiId: record.copy.mei_id,
    meiUrl: record.copy.mei_url,
    radar: radarView(record),
    horizontalJourney: horizontalJourneyView(record),
    fullJourneyMarkers: markers,
    stepMaps: stepMapsView(record),
    noMappablePath: !record.transfers.some((t) => t.mappable),
  };
}

export interface SssPathView {
  copyId: string;
  j: number;
  points: [number, number][];
  highlighted: boolean;
}

export function sssView(
  polylines: BundledPolylinePayload[],
  selected: string[],
): SssPathView[] {
  const chosen = new Set(selected);
  return polylines.map((poly) => ({
    copyId: poly.copy_id,
    j: poly.j,
    points: poly.points,
    highlighted: chosen.has(poly.copy_id),
  }));
}

/** The set of drawn edges must not depend on the bundling level. */
export function edgeIdSet(polylines: BundledPolylinePayload[]): Set<string> {
  return new Set(polylines.map((poly) => `${poly.copy_id}#${poly.j}`));
}

export interface SdsMarkerView {
  meiId: string;
  meiUrl: string | null;
  colorIndex: number;
  position: [number, number];
  j: number;
}

export interface SdsView {
  moving: SdsMarkerView[];
  finishedTrackIds: string[];
  skipped: [string, number][];
  done: boolean;
}

export function sdsView(
  timeline: TimelinePayload,
  frame: FrameView,
  briefsById: Map<string, CopyBrief>,
): SdsView {
  return {
    moving: frame.moving.map((marker) => ({
      meiId: marker.meiId,
      meiUrl: briefsById.get(marker.meiId)?.mei_url ?? null,
      colorIndex: marker.colorIndex,
      position: marker.position,
      j: marker.j,
    })),
    finishedTrackIds: frame.finishedTrackIds,
    skipped: timeline.skipped,
    done: frame.done,
  };
}
