/**
 * Browser rendering for the four panels. Maps are plain SVG drawn in an
 * equirectangular frame fitted to the data (a tile layer can be swapped in
 * behind the same geometry without touching the view-models).
 */

import type { FrameView } from "./playback.js";
import type {
  HeatmapView,
  InfoPanelView,
  MssRowView,
  SdsView,
  SssPathView,
} from "./viewmodels.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export const STYLESHEET = `
.pa-app { display: grid; grid-template-columns: 360px 1fr; gap: 12px;
          font: 13px/1.4 system-ui, sans-serif; }
.pa-panel { border: 1px solid #ccc; border-radius: 6px; padding: 8px; }
.pa-heatmap td { width: 16px; height: 16px; padding: 0; }
.pa-heatmap th { font-weight: normal; font-size: 10px; padding: 1px 3px; }
.pa-cell { cursor: pointer; }
.pa-button { margin: 2px; padding: 2px 8px; border-radius: 4px;
             border: 1px solid #888; background: #fff; cursor: pointer; }
.pa-button.anchored { background: #2a9d8f; color: #fff; }
.pa-marching { stroke-dasharray: 6 4; animation: pa-march 1s linear infinite; }
@keyframes pa-march { to { stroke-dashoffset: -10; } }
.pa-tooltip { position: fixed; background: #222; color: #fff; padding: 2px 6px;
              border-radius: 3px; pointer-events: none; font-size: 11px; }
.pa-notice { color: #a33; font-style: italic; }
`;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attributes: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attributes)) {
    node.setAttribute(key, String(value));
  }
  return node;
}

function heatColor(intensity: number): string {
  const scale = Math.round(255 - intensity * 200);
  return `rgb(255, ${scale}, ${Math.max(0, scale - 30)})`;
}

export function renderHeatmap(
  view: HeatmapView,
  onCellClick: (row: string, col: string) => void,
  onHover: (tooltip: string | null) => void,
): HTMLElement {
  const table = el("table", "pa-heatmap");
  const head = el("tr");
  head.appendChild(el("th"));
  for (const col of view.colLabels) head.appendChild(el("th", undefined, col));
  table.appendChild(head);
  view.cells.forEach((rowCells, r) => {
    const tr = el("tr");
    tr.appendChild(el("th", undefined, view.rowLabels[r]));
    for (const cell of rowCells) {
      const td = el("td", "pa-cell");
      td.style.background = heatColor(cell.intensity);
      td.title = cell.tooltip;
      td.addEventListener("click", () => onCellClick(cell.row, cell.col));
      td.addEventListener("mouseenter", () => onHover(cell.tooltip));
      td.addEventListener("mouseleave", () => onHover(null));
      tr.appendChild(td);
    }
    table.appendChild(tr);
  });
  return table;
}

export function renderInfoPanel(
  view: InfoPanelView,
  onButton: (meiId: string) => void,
): HTMLElement {
  const panel = el("div", "pa-panel");
  panel.appendChild(el("div", undefined, view.description));
  panel.appendChild(el("div", undefined,
    `${view.stats.copies} copies, ${view.stats.transfers} transfers, ` +
    `${view.stats.countries} countries`));
  const list = el("div");
  for (const button of view.buttons) {
    const node = el("button",
      button.anchored ? "pa-button anchored" : "pa-button", button.meiId);
    node.addEventListener("click", () => onButton(button.meiId));
    list.appendChild(node);
  }
  panel.appendChild(list);
  return panel;
}

interface Frame {
  minLat: number; maxLat: number; minLon: number; maxLon: number;
  width: number; height: number;
}

function fitFrame(points: [number, number][], width = 280, height = 180): Frame {
  const lats = points.map((p) => p[0]);
  const lons = points.map((p) => p[1]);
  const pad = 2;
  return {
    minLat: Math.min(...lats, 90) - pad,
    maxLat: Math.max(...lats, -90) + pad,
    minLon: Math.min(...lons, 180) - pad,
    maxLon: Math.max(...lons, -180) + pad,
    width,
    height,
  };
}

function toXY(frame: Frame, lat: number, lon: number): [number, number] {
  const x = ((lon - frame.minLon) / (frame.maxLon - frame.minLon)) * frame.width;
  const y = frame.height -
    ((lat - frame.minLat) / (frame.maxLat - frame.minLat)) * frame.height;
  return [x, y];
}

function pathFor(frame: Frame, points: [number, number][]): string {
  return points
    .map((p, i) => {
      const [x, y] = toXY(frame, p[0], p[1]);
      return `${i === 0 ? "M" : "L"}${x.toFixed(1)},${y.toFixed(1)}`;
    })
    .join(" ");
}

export function renderMssRow(
  view: MssRowView,
  onJourneyNodeClick: (orderIndex: number) => void,
): HTMLElement {
  const row = el("div", "pa-panel");
  row.id = `mss-${view.meiId}`;
  const title = el("div");
  title.appendChild(el("strong", undefined, view.meiId));
  if (view.meiUrl) {
    const link = el("a", undefined, " catalog record");
    link.setAttribute("href", view.meiUrl);
    title.appendChild(link);
  }
  row.appendChild(title);

  // Radar: one polygon vertex group per provenance spoke.
  const radar = svgEl("svg", { width: 120, height: 120, viewBox: "-60 -60 120 120" });
  const n = view.radar.length;
  view.radar.forEach((spoke, index) => {
    const angle = (2 * Math.PI * index) / Math.max(1, n) - Math.PI / 2;
    spoke.axes.forEach((axis, a) => {
      const radius = 12 + axis.radius * 16 + a * 2;
      radar.appendChild(svgEl("circle", {
        cx: Math.cos(angle) * radius,
        cy: Math.sin(angle) * radius,
        r: 3,
        fill: axis.color,
      }));
    });
    radar.appendChild(svgEl("line", {
      x1: 0, y1: 0,
      x2: Math.cos(angle) * 56, y2: Math.sin(angle) * 56,
      stroke: "#ddd",
    }));
  });
  row.appendChild(radar);

  // Horizontal journey: clickable circles linked to the step maps.
  const journey = svgEl("svg", { width: 30 * view.horizontalJourney.length + 20, height: 46 });
  view.horizontalJourney.forEach((node, index) => {
    const cx = 20 + index * 30;
    if (node.hasOutgoingTransfer) {
      journey.appendChild(svgEl("line", {
        x1: cx, y1: 20, x2: cx + 30, y2: 20,
        stroke: node.highlighted ? "#e63946" : "#888",
        "stroke-width": node.highlighted ? 3 : 1,
      }));
    }
    const circle = svgEl("circle", { cx, cy: 20, r: 7, fill: node.completenessColors[2] });
    circle.addEventListener("click", () => onJourneyNodeClick(node.orderIndex));
    journey.appendChild(circle);
    const label = svgEl("text", { x: cx, y: 40, "text-anchor": "middle", "font-size": 9 });
    label.textContent = String(node.orderIndex);
    journey.appendChild(label);
  });
  row.appendChild(journey);

  if (view.noMappablePath) {
    row.appendChild(el("div", "pa-notice", "no mappable path"));
    return row;
  }

  // Full-journey map with order-gradient single-color circle fills.
  const points = view.fullJourneyMarkers.map((m) => m.position);
  const frame = fitFrame(points);
  const fullMap = svgEl("svg", { width: frame.width, height: frame.height });
  fullMap.appendChild(svgEl("path", {
    d: pathFor(frame, points), fill: "none", stroke: "#457b9d", "stroke-width": 1.5,
  }));
  for (const marker of view.fullJourneyMarkers) {
    const [cx, cy] = toXY(frame, marker.position[0], marker.position[1]);
    const shade = Math.round(85 - marker.gradientFraction * 60);
    fullMap.appendChild(svgEl("circle", {
      cx, cy, r: 5, fill: `hsl(205 60% ${shade}%)`, stroke: "#1d3557",
    }));
  }
  row.appendChild(fullMap);

  // Step maps framing blocks j and j+1, latest leg emphasized.
  for (const step of view.stepMaps) {
    const holder = el("div");
    holder.id = `step-${view.meiId}-${step.j}`;
    if (!step.mappable || !step.from.position || !step.to.position) {
      holder.appendChild(el("div", "pa-notice", `transfer ${step.j}: not mappable`));
      row.appendChild(holder);
      continue;
    }
    const stepFrame = fitFrame([step.from.position, step.to.position], 200, 120);
    const svg = svgEl("svg", { width: stepFrame.width, height: stepFrame.height });
    const leg = svgEl("path", {
      d: pathFor(stepFrame, [step.from.position, step.to.position]),
      fill: "none", stroke: "#e63946", "stroke-width": 2,
    });
    leg.classList.add("pa-marching");
    svg.appendChild(leg);
    for (const end of [step.from, step.to]) {
      const [cx, cy] = toXY(stepFrame, end.position![0], end.position![1]);
      end.donut.colors.forEach((color, index) => {
        svg.appendChild(svgEl("circle", {
          cx, cy, r: 7 - index * 2, fill: "none", stroke: color, "stroke-width": 2,
        }));
      });
    }
    holder.appendChild(svg);
    row.appendChild(holder);
  }
  return row;
}

export function renderSss(paths: SssPathView[]): HTMLElement {
  const panel = el("div", "pa-panel");
  const all = paths.flatMap((p) => p.points);
  if (all.length === 0) {
    panel.appendChild(el("div", "pa-notice", "nothing to draw"));
    return panel;
  }
  const frame = fitFrame(all, 520, 320);
  const svg = svgEl("svg", { width: frame.width, height: frame.height });
  for (const path of paths) {
    const node = svgEl("path", {
      d: pathFor(frame, path.points),
      fill: "none",
      stroke: path.highlighted ? "#e63946" : "#6c757d",
      "stroke-width": path.highlighted ? 2.5 : 1,
      opacity: path.highlighted ? 1 : 0.55,
    });
    if (path.highlighted) node.classList.add("pa-marching");
    svg.appendChild(node);
  }
  panel.appendChild(svg);
  return panel;
}

export function renderSds(
  view: SdsView,
  frameBox: [number, number][],
  onMarkerClick: (meiId: string, meiUrl: string | null) => void,
): HTMLElement {
  const panel = el("div", "pa-panel");
  const frame = fitFrame(frameBox.length ? frameBox : [[0, 0]], 520, 320);
  const svg = svgEl("svg", { width: frame.width, height: frame.height });
  for (const marker of view.moving) {
    const [cx, cy] = toXY(frame, marker.position[0], marker.position[1]);
    const node = svgEl("circle", {
      cx, cy, r: 6,
      fill: `hsl(${(marker.colorIndex * 67) % 360} 70% 45%)`,
      cursor: "pointer",
    });
    node.addEventListener("click", () => onMarkerClick(marker.meiId, marker.meiUrl));
    svg.appendChild(node);
  }
  panel.appendChild(svg);
  if (view.skipped.length) {
    panel.appendChild(el("div", "pa-notice",
      `skipped unmappable transfers: ${view.skipped.map(([id, j]) => `${id}#${j}`).join(", ")}`));
  }
  return panel;
}

export function renderErrorBanner(message: string): HTMLElement {
  const banner = el("div", "pa-notice", message);
  banner.setAttribute("role", "alert");
  return banner;
}
