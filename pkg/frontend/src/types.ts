/** Payload shapes of the provenance-atlas HTTP API. */

export type CompletenessLevel = "accurate" | "approximate" | "missing";

export interface GeoPoint {
  lat: number;
  lon: number;
  country_code: string;
}

export interface GridPayload {
  row_labels: string[];
  col_labels: string[];
  counts: number[][];
  kind: "od_instances" | "copy_time" | "copy_location";
  ordering: "frequency" | "alphabetical" | "dataset";
}

export interface CopyBrief {
  mei_id: string;
  istc: string;
  n_provenances: number;
  mei_url: string | null;
  origin_place: string | null;
  origin_country: string | null;
  current_place: string | null;
  current_country: string | null;
}

export interface ProvenancePayload {
  order_index: number;
  start_year: number | null;
  end_year: number | null;
  place: string | null;
  geo: GeoPoint | null;
  completeness: {
    start_time: CompletenessLevel;
    end_time: CompletenessLevel;
    location: CompletenessLevel;
  };
  evidence: string;
}

export interface TransferPayload {
  copy_id: string;
  j: number;
  from_provenance: number;
  to_provenance: number;
  interval: [number, number] | null;
  consistent: boolean;
  from_geo: GeoPoint | null;
  to_geo: GeoPoint | null;
  from_country: string | null;
  to_country: string | null;
  mappable: boolean;
  zero_length: boolean;
}

export interface JourneyNodePayload {
  provenance: ProvenancePayload;
  transfer: TransferPayload | null;
}

export interface CopyRecord {
  digest: string;
  copy: CopyBrief;
  journey: JourneyNodePayload[];
  transfers: TransferPayload[];
  summary: {
    n_provenances: number;
    completeness_spokes: [number, CompletenessLevel, CompletenessLevel, CompletenessLevel][];
    highlight: number[];
  };
}

export interface QueryResultPayload {
  spec: { kind: "od" | "journey" | "id" } & Record<string, string>;
  copy_ids: string[];
  matched_transfers: Record<string, number[]>;
  stats: {
    n_copies: number;
    n_matched_transfers: number;
    n_distinct_countries: number;
  };
}

export interface BundledPolylinePayload {
  copy_id: string;
  j: number;
  /** [lat, lon] coordinate list; two points at level 0. */
  points: [number, number][];
}

export interface TimelineSegmentPayload {
  from: [number, number];
  to: [number, number];
  start_ms: number;
  duration_ms: number;
  j: number;
}

export interface TimelineTrackPayload {
  mei_id: string;
  color_index: number;
  segments: TimelineSegmentPayload[];
}

export interface TimelinePayload {
  mode: "all_at_once" | "one_by_one";
  total_ms: number;
  tracks: TimelineTrackPayload[];
  skipped: [string, number][];
}

export type BundlingLevel = 0 | 1 | 2 | 3 | 4;
