/** Thin fetch client over the explorer API plus a stale-response guard. */

import type {
  BundledPolylinePayload,
  BundlingLevel,
  CopyBrief,
  CopyRecord,
  GridPayload,
  QueryResultPayload,
  TimelinePayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function getJson<T>(url: string): Promise<T> {
  const response = await fetch(url);
  const body = (await response.json()) as Record<string, unknown>;
  if (!response.ok) {
    throw new ApiError(
      response.status,
      String(body["code"] ?? "UNKNOWN"),
      String(body["message"] ?? response.statusText),
    );
  }
  return body as T;
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  snapshot(): Promise<{ digest: string; counts: Record<string, number> }> {
    return getJson(this.url("/api/snapshot"));
  }

  copies(): Promise<{ digest: string; total: number; copies: CopyBrief[] }> {
    return getJson(this.url("/api/copies"));
  }

  copy(meiId: string, activeOd?: [string, string]): Promise<CopyRecord> {
    const active = activeOd
      ? `?query_from=${encodeURIComponent(activeOd[0])}&query_to=${encodeURIComponent(activeOd[1])}`
      : "";
    return getJson(this.url(`/api/copies/${encodeURIComponent(meiId)}${active}`));
  }

  odHeatmap(order: "frequency" | "alphabetical"): Promise<{ grid: GridPayload }> {
    return getJson(this.url(`/api/heatmaps/od?order=${order}`));
  }

  timeHeatmap(bucket?: number): Promise<{ grid: GridPayload }> {
    const suffix = bucket === undefined ? "" : `?bucket=${bucket}`;
    return getJson(this.url(`/api/heatmaps/time${suffix}`));
  }

  locationHeatmap(): Promise<{ grid: GridPayload }> {
    return getJson(this.url("/api/heatmaps/location"));
  }

  queryOd(from: string, to: string): Promise<{ result: QueryResultPayload }> {
    return getJson(this.url(
      `/api/query?kind=od&from=${encodeURIComponent(from)}&to=${encodeURIComponent(to)}`));
  }

  queryJourney(origin: string, destination: string): Promise<{ result: QueryResultPayload }> {
    return getJson(this.url(
      `/api/query?kind=journey&origin=${encodeURIComponent(origin)}` +
      `&destination=${encodeURIComponent(destination)}`));
  }

  queryById(meiId: string): Promise<{ result: QueryResultPayload }> {
    return getJson(this.url(`/api/query?kind=id&id=${encodeURIComponent(meiId)}`));
  }

  bundle(level: BundlingLevel): Promise<{ level: number; polylines: BundledPolylinePayload[] }> {
    return getJson(this.url(`/api/bundle?level=${level}`));
  }

  async animation(
    ids: string[],
    mode: "all_at_once" | "one_by_one",
  ): Promise<{ timeline: TimelinePayload }> {
    const response = await fetch(this.url("/api/animation"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ ids, mode }),
    });
    const body = (await response.json()) as Record<string, unknown>;
    if (!response.ok) {
      throw new ApiError(response.status, String(body["code"] ?? "UNKNOWN"),
        String(body["message"] ?? response.statusText));
    }
    return body as unknown as { timeline: TimelinePayload };
  }
}

/**
 * Keeps only the most recent request per slot: responses arriving after a
 * newer request was issued are discarded.
 */
export class StaleGuard {
  private sequence = new Map<string, number>();

  async latest<T>(slot: string, request: () => Promise<T>): Promise<T | null> {
    const ticket = (this.sequence.get(slot) ?? 0) + 1;
    this.sequence.set(slot, ticket);
    const value = await request();
    return this.sequence.get(slot) === ticket ? value : null;
  }
}
