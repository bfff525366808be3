/** Sharable hash routes: #/copy/{mei_id} and #/query/od/{from}/{to}. */

import type { QueryDescriptor } from "./state.js";

export type DeepLink =
  | { kind: "copy"; meiId: string }
  | { kind: "od_query"; from: string; to: string };

export function formatCopyLink(meiId: string): string {
  return `#/copy/${encodeURIComponent(meiId)}`;
}

export function formatOdQueryLink(from: string, to: string): string {
  return `#/query/od/${encodeURIComponent(from)}/${encodeURIComponent(to)}`;
}

export function parseDeepLink(hash: string): DeepLink | null {
  const parts = hash.replace(/^#\/?/, "").split("/").map(decodeURIComponent);
  if (parts.length === 2 && parts[0] === "copy" && parts[1]) {
    return { kind: "copy", meiId: parts[1] };
  }
  if (parts.length === 4 && parts[0] === "query" && parts[1] === "od"
      && parts[2] && parts[3]) {
    return { kind: "od_query", from: parts[2], to: parts[3] };
  }
  return null;
}

export function linkToQuery(link: DeepLink): QueryDescriptor | null {
  if (link.kind === "od_query") return { kind: "od", from: link.from, to: link.to };
  if (link.kind === "copy") return { kind: "id", id: link.meiId };
  return null;
}
