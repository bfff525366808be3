/** Browser bootstrap: wires the API client, reducers and DOM renderers. */

import { ApiClient, StaleGuard } from "./api.js";
import { linkToQuery, parseDeepLink } from "./deeplinks.js";
import {
  STYLESHEET,
  renderErrorBanner,
  renderHeatmap,
  renderInfoPanel,
  renderMssRow,
  renderSds,
  renderSss,
} from "./dom.js";
import { frameAt } from "./playback.js";
import { initialState, reduce, type Action, type UiState } from "./state.js";
import {
  edgeIdSet,
  heatmapView,
  infoPanelView,
  mssRowView,
  sdsView,
  sssView,
} from "./viewmodels.js";
import type { BundledPolylinePayload, BundlingLevel, CopyBrief, CopyRecord } from "./types.js";

interface AppContext {
  state: UiState;
  client: ApiClient;
  guard: StaleGuard;
  briefs: Map<string, CopyBrief>;
  records: Map<string, CopyRecord>;
  polylines: BundledPolylinePayload[];
  root: HTMLElement;
}

export async function start(root: HTMLElement, baseUrl: string): Promise<void> {
  const style = document.createElement("style");
  style.textContent = STYLESHEET;
  document.head.appendChild(style);

  const context: AppContext = {
    state: initialState,
    client: new ApiClient(baseUrl),
    guard: new StaleGuard(),
    briefs: new Map(),
    records: new Map(),
    polylines: [],
    root,
  };

  const listing = await context.client.copies();
  for (const brief of listing.copies) context.briefs.set(brief.mei_id, brief);

  const deepLink = parseDeepLink(window.location.hash);
  if (deepLink) {
    const query = linkToQuery(deepLink);
    if (query?.kind === "od") await runOdQuery(context, query.from, query.to);
    if (query?.kind === "id") {
      const response = await context.client.queryById(query.id);
      dispatch(context, { type: "query_resolved", query, result: response.result });
      await toggleCopy(context, query.id);
    }
  }
  await refreshBundles(context);
  await render(context);
}

function dispatch(context: AppContext, action: Action): void {
  context.state = reduce(context.state, action);
}

async function runOdQuery(context: AppContext, from: string, to: string): Promise<void> {
  const response = await context.guard.latest("query",
    () => context.client.queryOd(from, to));
  if (response) {
    dispatch(context, {
      type: "query_resolved",
      query: { kind: "od", from, to },
      result: response.result,
    });
    window.location.hash = `#/query/od/${from}/${to}`;
  }
}

async function toggleCopy(context: AppContext, meiId: string): Promise<void> {
  dispatch(context, { type: "toggle_select", meiId });
  if (context.state.selected.includes(meiId) && !context.records.has(meiId)) {
    const active = context.state.activeQuery?.kind === "od"
      ? [context.state.activeQuery.from, context.state.activeQuery.to] as [string, string]
      : undefined;
    context.records.set(meiId, await context.client.copy(meiId, active));
  }
}

async function refreshBundles(context: AppContext): Promise<void> {
  const response = await context.guard.latest("bundle",
    () => context.client.bundle(context.state.bundlingLevel));
  if (response) context.polylines = response.polylines;
}

async function render(context: AppContext): Promise<void> {
  const { root, state } = context;
  root.textContent = "";
  root.className = "pa-app";
  const left = document.createElement("div");
  const right = document.createElement("div");
  root.append(left, right);

  try {
    const od = await context.client.odHeatmap("frequency");
    left.appendChild(renderHeatmap(
      heatmapView(od.grid),
      (row, col) => { void runOdQuery(context, row, col).then(() => render(context)); },
      () => undefined,
    ));
    const time = await context.client.timeHeatmap();
    left.appendChild(renderHeatmap(heatmapView(time.grid), () => undefined, () => undefined));
    const location = await context.client.locationHeatmap();
    left.appendChild(renderHeatmap(heatmapView(location.grid), () => undefined, () => undefined));
  } catch (error) {
    left.appendChild(renderErrorBanner(`heatmaps unavailable: ${String(error)}`));
  }

  if (state.activeQuery && state.lastResult) {
    left.appendChild(renderInfoPanel(
      infoPanelView(state.activeQuery, state.lastResult, state.selected),
      (meiId) => { void toggleCopy(context, meiId).then(() => render(context)); },
    ));
  }

  for (const meiId of state.selected) {
    const record = context.records.get(meiId);
    if (record) {
      right.appendChild(renderMssRow(mssRowView(record), (orderIndex) => {
        document.getElementById(`step-${meiId}-${orderIndex}`)?.scrollIntoView();
      }));
    }
  }

  const levelBar = document.createElement("div");
  for (const level of [0, 1, 2, 3, 4] as BundlingLevel[]) {
    const button = document.createElement("button");
    button.className = "pa-button" + (state.bundlingLevel === level ? " anchored" : "");
    button.textContent = level === 0 ? "straight" : `bundle ${level}`;
    button.addEventListener("click", () => {
      dispatch(context, { type: "set_bundling_level", level });
      void refreshBundles(context).then(() => {
        // level switches must never change which edges are drawn
        console.assert(edgeIdSet(context.polylines).size === context.polylines.length);
        void render(context);
      });
    });
    levelBar.appendChild(button);
  }
  right.appendChild(levelBar);
  right.appendChild(renderSss(sssView(context.polylines, state.selected)));

  const playBar = document.createElement("div");
  const playButton = document.createElement("button");
  playButton.className = "pa-button";
  playButton.textContent = "play selection";
  playButton.addEventListener("click", () => { void play(context); });
  playBar.appendChild(playButton);
  for (const [label, action] of [
    ["pause", { type: "pause" } as Action],
    ["resume", { type: "resume" } as Action],
    ["stop", { type: "stop" } as Action],
  ] as const) {
    const button = document.createElement("button");
    button.className = "pa-button";
    button.textContent = label;
    button.addEventListener("click", () => dispatch(context, action));
    playBar.appendChild(button);
  }
  const modeButton = document.createElement("button");
  modeButton.className = "pa-button";
  modeButton.textContent = `mode: ${state.animationMode}`;
  modeButton.addEventListener("click", () => {
    dispatch(context, {
      type: "set_animation_mode",
      mode: state.animationMode === "one_by_one" ? "all_at_once" : "one_by_one",
    });
    void render(context);
  });
  playBar.appendChild(modeButton);
  right.appendChild(playBar);

  const { playback } = state;
  if (playback.timeline && playback.status !== "idle") {
    const frame = frameAt(playback.timeline, playback.elapsedMs);
    const box = playback.timeline.tracks.flatMap(
      (track) => track.segments.flatMap((s) => [s.from, s.to]));
    right.appendChild(renderSds(
      sdsView(playback.timeline, frame, context.briefs),
      box,
      (meiId, meiUrl) => {
        if (meiUrl) window.open(meiUrl, "_blank");
        else window.alert(meiId);
      },
    ));
  }
}

async function play(context: AppContext): Promise<void> {
  if (context.state.selected.length === 0) return;
  try {
    const response = await context.client.animation(
      context.state.selected, context.state.animationMode);
    dispatch(context, { type: "play", timeline: response.timeline });
  } catch (error) {
    context.root.appendChild(renderErrorBanner(String(error)));
    return;
  }
  const startedAt = Date.now();
  let last = startedAt;
  const timer = window.setInterval(() => {
    const now = Date.now();
    if (context.state.playback.status === "playing") {
      dispatch(context, { type: "tick", deltaMs: now - last });
    }
    last = now;
    if (context.state.playback.status === "stopped") window.clearInterval(timer);
    void render(context);
  }, 100);
}
