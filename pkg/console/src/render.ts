/** HTML-string renderers for the condition and result panels.
 *
 * Every number shown comes verbatim from a server response; the console
 * computes layout only. String output keeps these functions testable
 * without a DOM.
 */

import type {
  ConstraintsEcho,
  GroupJson,
  QueryResponse,
  TrajectoryJson,
} from "./types.js";

export const TOPIC_COLORS = [
  "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1",
  "#76b7b2", "#edc948", "#ff9da7", "#9c755f", "#bab0ac",
];

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function fmtWindow(win: { start: number | null; end: number | null; daily: boolean }): string {
  const fmt = (ts: number | null, daily: boolean) => {
    if (ts === null) return "…";
    if (daily) {
      const h = Math.floor(ts / 3600);
      const m = Math.floor((ts % 3600) / 60);
      return `${String(h).padStart(2, "0")}:${String(m).padStart(2, "0")}`;
    }
    return new Date(ts * 1000).toISOString().replace("T", " ").slice(0, 16);
  };
  const suffix = win.daily ? " (every day)" : "";
  return `[${fmt(win.start, win.daily)} → ${fmt(win.end, win.daily)})${suffix}`;
}

/** Sentence words as chips, one per word, colored by kind. */
export function renderWordChips(constraints: ConstraintsEcho): string {
  const chips = constraints.words
    .map(
      (w) =>
        `<span class="chip chip-${w.kind}" data-word="${esc(w.text.toLowerCase())}"` +
        ` title="click to change kind">${esc(w.text)}<small>${w.kind}</small></span>`,
    )
    .join("");
  const windows = constraints.windows.map((w) => `<code>${fmtWindow(w)}</code>`).join(" ");
  return `<div class="chips">${chips}</div><div class="windows">time: ${windows}</div>`;
}

/** Keyword nodes -> neighbor bars (width = similarity) -> POI bars (width = score). */
export function renderRelevanceTree(response: QueryResponse): string {
  if (response.groups.length === 0) {
    return `<p class="empty">No spatial constraints extracted. Edit the sentence or reassign word kinds.</p>`;
  }
  const maxScore = Math.max(
    1e-12,
    ...response.groups.flatMap((g) => g.pois.map((p) => p.score)),
  );
  const parts: string[] = [];
  response.groups.forEach((group: GroupJson, gi: number) => {
    const order = group.order_index === null ? "" : `<span class="order">#${group.order_index + 1}</span>`;
    const keywords = group.keywords
      .map((kw) => {
        const neighborBars = kw.neighbors
          .map(
            (n) =>
              `<div class="bar-row neighbor" data-word="${esc(n.word)}">` +
              `<span class="bar" style="width:${(n.sim * 100).toFixed(1)}%"></span>` +
              `<label>${esc(n.word)} <small>${n.sim.toFixed(3)}</small></label></div>`,
          )
          .join("");
        return `<div class="keyword-node"><strong>${esc(kw.word)}</strong>${neighborBars}</div>`;
      })
      .join("");
    const poiBars = group.pois
      .map(
        (p) =>
          `<div class="bar-row poi" data-poi="${esc(p.poi_id)}">` +
          `<span class="bar" style="width:${((p.score / maxScore) * 100).toFixed(1)}%"></span>` +
          `<label>${esc(p.name)} <small>${p.score.toFixed(4)}</small></label></div>`,
      )
      .join("");
    parts.push(
      `<div class="group" data-group="${gi}">` +
        `<div class="group-head">group ${gi + 1} ${order}</div>` +
        `<div class="group-body"><div class="keywords">${keywords}</div>` +
        `<div class="pois">${poiBars}</div></div></div>`,
    );
  });
  return parts.join("");
}

/** Ranked rows with relevance bars and selection checkboxes, server order. */
export function renderResultList(response: QueryResponse, selected: Set<string>): string {
  if (response.trajectories.length === 0) {
    return `<p class="empty">No trajectories matched.</p>`;
  }
  const rows = response.trajectories
    .map((t: TrajectoryJson) => {
      const checked = selected.has(t.id) ? " checked" : "";
      return (
        `<li class="result-row" data-id="${esc(t.id)}">` +
        `<input type="checkbox" data-select="${esc(t.id)}"${checked}>` +
        `<span class="bar" style="width:${(t.relevance * 100).toFixed(1)}%"></span>` +
        `<span class="rel">${t.relevance.toFixed(3)}</span>` +
        `<span class="tid">${esc(t.id)}</span>` +
        `<small>${t.points.length} pts</small></li>`
      );
    })
    .join("");
  return `<ol class="results">${rows}</ol>`;
}

export function renderStatus(response: QueryResponse): string {
  return (
    `${response.trajectories.length} of ${response.total_results} trajectories, ` +
    `${response.timing_ms.toFixed(1)} ms`
  );
}
