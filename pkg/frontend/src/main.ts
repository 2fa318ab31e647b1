/**
 * DOM wiring for the operator console: scene loading, the prompt box, the
 * heatmap + path canvas, the coefficient table, and the prompt history.
 */

import { ApiClient } from "./api.js";
import { renderField } from "./render.js";
import { DEFAULT_PARAMS, SessionController } from "./state.js";
import type { PlannerParams } from "./api.js";

const SCALE = 12;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function showError(message: string | null): void {
  const banner = el<HTMLDivElement>("error-banner");
  banner.textContent = message ?? "";
  banner.style.display = message ? "block" : "none";
}

function drawState(controller: SessionController): void {
  const state = controller.state;
  if (!state) {
    return;
  }
  const canvas = el<HTMLCanvasElement>("field-canvas");
  let image;
  try {
    image = renderField(state.field, {
      blocked: state.scene.blocked,
      path: state.path?.cells ?? [],
      start: state.scene.start_cell,
      goal: state.scene.goal_cell,
    });
  } catch (err) {
    showError(err instanceof Error ? err.message : String(err));
    return;
  }
  canvas.width = image.width * SCALE;
  canvas.height = image.height * SCALE;
  const ctx = canvas.getContext("2d");
  if (!ctx) {
    return;
  }
  const raw = new ImageData(image.width, image.height);
  raw.data.set(image.pixels);
  const off = document.createElement("canvas");
  off.width = image.width;
  off.height = image.height;
  off.getContext("2d")?.putImageData(raw, 0, 0);
  ctx.imageSmoothingEnabled = false;
  ctx.drawImage(off, 0, 0, canvas.width, canvas.height);

  el<HTMLSpanElement>("field-version").textContent = String(state.fieldVersion);
  const metrics = state.path
    ? `length ${state.path.length_m.toFixed(3)} m, ` +
      `MDO ${state.path.mdo_m === null ? "n/a" : state.path.mdo_m.toFixed(2) + " m"}, ` +
      `${state.path.expansions} expansions (${state.path.planner})`
    : "no path planned yet";
  el<HTMLSpanElement>("path-metrics").textContent = metrics;

  const table = el<HTMLTableSectionElement>("coefficients-body");
  table.innerHTML = "";
  for (const [family, value] of Object.entries(state.posteriors)) {
    const row = table.insertRow();
    row.insertCell().textContent = family;
    row.insertCell().textContent = value.toFixed(4);
  }

  const history = el<HTMLUListElement>("history-list");
  history.innerHTML = "";
  for (const entry of state.history) {
    const item = document.createElement("li");
    const deltas = Object.keys(entry.after)
      .map((f) => `${f} ${(entry.before[f] ?? 0).toFixed(2)}→${(entry.after[f] ?? 0).toFixed(2)}`)
      .join(", ");
    const mdo = entry.mdoM === null ? "n/a" : `${entry.mdoM.toFixed(2)} m`;
    item.textContent =
      `[v${entry.fieldVersion}] "${entry.prompt}" (${entry.provider}) — ` +
      `${deltas} — length ${entry.lengthM.toFixed(3)} m, MDO ${mdo}`;
    history.appendChild(item);
  }
}

function readParams(): PlannerParams {
  const num = (id: string, fallback: number) => {
    const raw = el<HTMLInputElement>(id).value;
    const parsed = Number(raw);
    return Number.isFinite(parsed) ? parsed : fallback;
  };
  const mode = el<HTMLSelectElement>("param-mode").value;
  return {
    w1: num("param-w1", DEFAULT_PARAMS.w1 ?? 2),
    w2: num("param-w2", DEFAULT_PARAMS.w2 ?? 2),
    lambda: num("param-lambda", DEFAULT_PARAMS.lambda ?? 1),
    beta: num("param-beta", DEFAULT_PARAMS.beta ?? 1),
    cost_mode: mode === "heuristic_only" ? "heuristic_only" : "cost_augmented",
  };
}

function setBusy(busy: boolean): void {
  el<HTMLButtonElement>("prompt-submit").disabled = busy;
  el<HTMLButtonElement>("plan-baseline").disabled = busy;
  el<HTMLButtonElement>("plan-mha").disabled = busy;
}

async function boot(): Promise<void> {
  let controller: SessionController | null = null;

  el<HTMLButtonElement>("scene-load").addEventListener("click", async () => {
    showError(null);
    const base = el<HTMLInputElement>("server-url").value.replace(/\/+$/, "");
    const client = new ApiClient(base);
    try {
      const doc = JSON.parse(el<HTMLTextAreaElement>("scene-json").value);
      controller = new SessionController(client);
      await controller.loadScene(doc, readParams());
      await controller.planOnly("baseline");
      drawState(controller);
    } catch (err) {
      controller = null;
      showError(err instanceof Error ? err.message : String(err));
    }
  });

  el<HTMLButtonElement>("prompt-submit").addEventListener("click", async () => {
    if (!controller?.state) {
      showError("load a scene first");
      return;
    }
    const text = el<HTMLInputElement>("prompt-text").value;
    if (!text.trim()) {
      showError("prompt must not be empty");
      return;
    }
    controller.state.params = readParams();
    showError(null);
    setBusy(true);
    try {
      await controller.submitPrompt(text, el<HTMLSelectElement>("provider-select").value);
      el<HTMLInputElement>("prompt-text").value = "";
    } catch (err) {
      showError(err instanceof Error ? err.message : String(err));
    } finally {
      setBusy(false);
      drawState(controller);
    }
  });

  const planHandler = (strategy: "baseline" | "mha") => async () => {
    if (!controller?.state) {
      showError("load a scene first");
      return;
    }
    controller.state.params = readParams();
    setBusy(true);
    try {
      await controller.planOnly(strategy);
      showError(null);
    } catch (err) {
      showError(err instanceof Error ? err.message : String(err));
    } finally {
      setBusy(false);
      drawState(controller);
    }
  };
  el<HTMLButtonElement>("plan-baseline").addEventListener("click", planHandler("baseline"));
  el<HTMLButtonElement>("plan-mha").addEventListener("click", planHandler("mha"));
}

boot().catch((err) => showError(String(err)));
