/** DOM wiring for the console; all logic lives in the pure modules. */

import { ApiClient } from "./api.js";
import { centroid, fitView, topicPlacement, topicPolygon } from "./geometry.js";
import {
  renderRelevanceTree,
  renderResultList,
  renderStatus,
  renderWordChips,
  TOPIC_COLORS,
} from "./render.js";
import {
  ConsoleState,
  initialState,
  QueryCoordinator,
  toggleSelection,
} from "./state.js";
import { brushFilter, computeSegments, timeExtent } from "./temporal.js";
import type { QueryResponse, TopicJson } from "./types.js";

const WORD_KINDS = ["spatial", "temporal", "conjunction"];

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function apiBase(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get("api") ?? "http://127.0.0.1:8000";
}

async function start(): Promise<void> {
  const api = new ApiClient(apiBase());
  let topics: TopicJson[] = [];
  try {
    topics = await api.topics();
    el("conn").textContent = `connected to ${apiBase()}`;
  } catch {
    el("conn").textContent = `cannot reach ${apiBase()} - start \`trajecta serve\` (override with ?api=...)`;
  }

  const state = initialState(topics.length);
  const coordinator = new QueryCoordinator(api, render);

  // --- topic weight sliders -------------------------------------------------
  const weightsBox = el("topic-weights");
  topics.forEach((topic, i) => {
    const row = document.createElement("label");
    row.className = "weight-row";
    row.innerHTML =
      `<span class="swatch" style="background:${TOPIC_COLORS[i % TOPIC_COLORS.length]}"></span>` +
      `<span class="wlabel" title="${topic.label}">${topic.label.slice(0, 22)}</span>` +
      `<input type="range" min="0" max="1" step="0.1" value="0" data-topic="${i}">` +
      `<span class="wval">0.0</span>`;
    weightsBox.appendChild(row);
  });

  const run = () => {
    state.sentence = (el<HTMLInputElement>("sentence")).value;
    void coordinator.run(state);
  };

  el("go").addEventListener("click", run);
  el<HTMLInputElement>("sentence").addEventListener("keydown", (ev) => {
    if (ev.key === "Enter") run();
  });

  // sliders re-query on release (change), not on drag (input)
  const alphaSlider = el<HTMLInputElement>("alpha");
  const betaSlider = el<HTMLInputElement>("beta");
  alphaSlider.addEventListener("input", () => (el("alpha-val").textContent = alphaSlider.value));
  betaSlider.addEventListener("input", () => (el("beta-val").textContent = betaSlider.value));
  alphaSlider.addEventListener("change", () => {
    state.alpha = Number(alphaSlider.value);
    if (state.response) run();
  });
  betaSlider.addEventListener("change", () => {
    state.beta = Number(betaSlider.value);
    if (state.response) run();
  });
  weightsBox.addEventListener("change", (ev) => {
    const input = ev.target as HTMLInputElement;
    const idx = input.dataset.topic;
    if (idx === undefined) return;
    state.topicWeights[Number(idx)] = Number(input.value);
    (input.parentElement!.querySelector(".wval") as HTMLElement).textContent =
      Number(input.value).toFixed(1);
    if (state.response) run();
  });

  el("k-minus").addEventListener("click", () => {
    state.k = Math.max(1, state.k - 1);
    el("k-val").textContent = String(state.k);
    if (state.response) run();
  });
  el("k-plus").addEventListener("click", () => {
    state.k += 1;
    el("k-val").textContent = String(state.k);
    if (state.response) run();
  });

  // word chips cycle kind overrides; next query picks them up
  el("chips-box").addEventListener("click", (ev) => {
    const chip = (ev.target as HTMLElement).closest(".chip") as HTMLElement | null;
    if (!chip || !chip.dataset.word) return;
    const word = chip.dataset.word;
    const current = state.wordOverrides[word] ?? chip.className.match(/chip-(\w+)/)?.[1] ?? "spatial";
    const next = WORD_KINDS[(WORD_KINDS.indexOf(current) + 1) % WORD_KINDS.length];
    state.wordOverrides[word] = next;
    run();
  });

  el("results-box").addEventListener("change", (ev) => {
    const input = ev.target as HTMLInputElement;
    const id = input.dataset.select;
    if (!id) return;
    toggleSelection(state, id);
    render(state);
  });

  el("tree-box").addEventListener("mouseover", (ev) => {
    const row = (ev.target as HTMLElement).closest(".bar-row.poi") as HTMLElement | null;
    hoveredPoi = row?.dataset.poi ?? null;
    if (state.response) drawSpatial(state.response, state);
  });

  // temporal brush: drag across the band canvas
  const temporalCanvas = el<HTMLCanvasElement>("temporal");
  let dragStart: number | null = null;
  const canvasTime = (ev: MouseEvent): number | null => {
    if (!state.response) return null;
    const extent = timeExtent(selectedTrajectories(state));
    if (!extent) return null;
    const rect = temporalCanvas.getBoundingClientRect();
    const frac = (ev.clientX - rect.left) / rect.width;
    return extent[0] + frac * (extent[1] - extent[0]);
  };
  temporalCanvas.addEventListener("mousedown", (ev) => (dragStart = canvasTime(ev)));
  temporalCanvas.addEventListener("mouseup", (ev) => {
    const end = canvasTime(ev);
    if (dragStart !== null && end !== null && Math.abs(end - dragStart) > 1) {
      state.brush = [Math.min(dragStart, end), Math.max(dragStart, end)];
    } else {
      state.brush = null;
    }
    dragStart = null;
    render(state);
  });

  let hoveredPoi: string | null = null;

  function selectedTrajectories(s: ConsoleState) {
    if (!s.response) return [];
    if (s.selected.size === 0) return [];
    return s.response.trajectories.filter((t) => s.selected.has(t.id));
  }

  function drawSpatial(response: QueryResponse, s: ConsoleState): void {
    const canvas = el<HTMLCanvasElement>("spatial");
    const ctx = canvas.getContext("2d")!;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    const everything = [
      ...response.trajectories.flatMap((t) => t.points.map((p) => ({ lon: p.lon, lat: p.lat }))),
      ...response.groups.flatMap((g) => g.pois.map((p) => ({ lon: p.lon, lat: p.lat }))),
    ];
    if (everything.length === 0) return;
    const toPx = fitView(everything, { width: canvas.width, height: canvas.height, pad: 14 });
    const visible = brushFilter(response.trajectories, s.brush);

    for (const traj of response.trajectories) {
      if (!visible.has(traj.id)) continue;
      const isSelected = s.selected.size === 0 || s.selected.has(traj.id);
      ctx.strokeStyle = isSelected ? "rgba(40,80,160,0.55)" : "rgba(120,120,120,0.15)";
      ctx.lineWidth = isSelected ? 1.6 : 1;
      ctx.beginPath();
      traj.points.forEach((p, i) => {
        const { x, y } = toPx(p.lon, p.lat);
        if (i === 0) ctx.moveTo(x, y);
        else ctx.lineTo(x, y);
      });
      ctx.stroke();
    }
    for (const group of response.groups) {
      for (const poi of group.pois) {
        const { x, y } = toPx(poi.lon, poi.lat);
        const hot = hoveredPoi === poi.poi_id;
        ctx.fillStyle = hot ? "#d62728" : "#e8a33d";
        ctx.beginPath();
        ctx.arc(x, y, hot ? 6 : 3.5, 0, 2 * Math.PI);
        ctx.fill();
      }
    }
  }

  function drawSemantics(s: ConsoleState): void {
    const canvas = el<HTMLCanvasElement>("semantics");
    const ctx = canvas.getContext("2d")!;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    const T = topics.length;
    if (T < 3) return;
    const verts = topicPolygon(T, canvas.width / 2, canvas.height / 2, canvas.height / 2 - 28);
    ctx.strokeStyle = "#999";
    ctx.beginPath();
    verts.forEach((v, i) => (i === 0 ? ctx.moveTo(v.x, v.y) : ctx.lineTo(v.x, v.y)));
    ctx.closePath();
    ctx.stroke();
    ctx.font = "11px sans-serif";
    verts.forEach((v, i) => {
      const c = centroid(verts);
      const lx = v.x + (v.x - c.x) * 0.1;
      const ly = v.y + (v.y - c.y) * 0.1;
      ctx.fillStyle = TOPIC_COLORS[i % TOPIC_COLORS.length];
      ctx.beginPath();
      ctx.arc(v.x, v.y, 4, 0, 2 * Math.PI);
      ctx.fill();
      ctx.fillStyle = "#333";
      ctx.textAlign = lx < c.x ? "right" : "left";
      ctx.fillText(topics[i].label.slice(0, 18), lx, ly);
    });
    const shown = selectedTrajectories(s);
    const visible = brushFilter(shown, s.brush);
    for (const traj of shown) {
      if (!visible.has(traj.id)) continue;
      ctx.strokeStyle = "rgba(40,80,160,0.6)";
      ctx.beginPath();
      traj.points.forEach((p, i) => {
        const pos = topicPlacement(p.topics, verts);
        if (i === 0) ctx.moveTo(pos.x, pos.y);
        else ctx.lineTo(pos.x, pos.y);
      });
      ctx.stroke();
    }
  }

  function drawTemporal(s: ConsoleState): void {
    const canvas = temporalCanvas;
    const ctx = canvas.getContext("2d")!;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    const shown = selectedTrajectories(s);
    const extent = timeExtent(shown);
    if (!extent) return;
    const [lo, hi] = extent;
    const span = Math.max(hi - lo, 1);
    const rowH = Math.min(22, (canvas.height - 18) / Math.max(shown.length, 1));
    ctx.font = "10px sans-serif";
    shown.forEach((traj, row) => {
      const y = 10 + row * rowH;
      ctx.fillStyle = "#333";
      ctx.fillText(traj.id.slice(0, 16), 2, y + rowH * 0.6);
      for (const seg of computeSegments(traj)) {
        const x0 = 110 + ((seg.start - lo) / span) * (canvas.width - 120);
        const x1 = 110 + ((seg.end - lo) / span) * (canvas.width - 120);
        ctx.fillStyle = TOPIC_COLORS[seg.topic % TOPIC_COLORS.length];
        ctx.fillRect(x0, y, Math.max(x1 - x0, 2), rowH - 4);
      }
    });
    if (s.brush) {
      const [b0, b1] = s.brush;
      const x0 = 110 + ((b0 - lo) / span) * (canvas.width - 120);
      const x1 = 110 + ((b1 - lo) / span) * (canvas.width - 120);
      ctx.fillStyle = "rgba(60,60,60,0.15)";
      ctx.fillRect(x0, 0, x1 - x0, canvas.height);
    }
  }

  function render(s: ConsoleState): void {
    el("status").textContent = s.inFlight
      ? "querying..."
      : s.error
        ? `error: ${s.error}`
        : s.response
          ? renderStatus(s.response)
          : "";
    if (!s.response) {
      if (s.error) el("tree-box").innerHTML = "";
      return;
    }
    el("chips-box").innerHTML = renderWordChips(s.response.constraints);
    el("tree-box").innerHTML = renderRelevanceTree(s.response);
    el("results-box").innerHTML = renderResultList(s.response, s.selected);
    drawSpatial(s.response, s);
    drawSemantics(s);
    drawTemporal(s);
  }
}

void start();
