/**
 * Session view state and the prompt -> plan round-trip.
 *
 * The controller performs no local inference: every number it stores comes
 * straight out of a server response (the ApiClient keeps the request log that
 * proves it). Mutations are serialized: while one submission is in flight the
 * controller rejects further ones, and any failure leaves the state exactly
 * as it was.
 */

import { ApiClient, ApiError } from "./api.js";
import type { FieldSnapshot, PlanResponse, PlannerParams, SceneSummary } from "./api.js";

export interface HistoryEntry {
  prompt: string;
  provider: string;
  before: Record<string, number>;
  after: Record<string, number>;
  lengthM: number;
  mdoM: number | null;
  expansions: number;
  fieldVersion: number;
}

export interface ViewState {
  sessionId: string;
  scene: SceneSummary;
  field: FieldSnapshot;
  fieldVersion: number;
  posteriors: Record<string, number>;
  path: PlanResponse | null;
  history: HistoryEntry[];
  params: PlannerParams;
  busy: boolean;
  error: string | null;
}

export const DEFAULT_PARAMS: PlannerParams = {
  w1: 2.0,
  w2: 2.0,
  lambda: 1.0,
  beta: 1.0,
  cost_mode: "cost_augmented",
};

export class SessionController {
  state: ViewState | null = null;

  constructor(readonly client: ApiClient) {}

  /** Create a session from a scene document and pull the first field snapshot. */
  async loadScene(doc: unknown, params: PlannerParams = { ...DEFAULT_PARAMS }): Promise<ViewState> {
    const created = await this.client.createScene(doc);
    const scene = await this.client.getScene(created.session);
    const field = await this.client.getField(created.session);
    this.state = {
      sessionId: created.session,
      scene,
      field,
      fieldVersion: field.version,
      posteriors: created.posteriors,
      path: null,
      history: [],
      params,
      busy: false,
      error: null,
    };
    return this.state;
  }

  /** Plan with the current strategy without touching coefficients. */
  async planOnly(strategy: "baseline" | "mha"): Promise<PlanResponse> {
    const state = this.requireState();
    const path = await this.client.plan(state.sessionId, strategy, state.params);
    state.path = path;
    return path;
  }

  /**
   * The operator loop: consolidate the prompt, re-plan, refresh the heatmap,
   * and append a history row. Client-side validation rejects empty prompts
   * before any request is made.
   */
  async submitPrompt(text: string, provider: string = "lexicon"): Promise<HistoryEntry> {
    const state = this.requireState();
    if (state.busy) {
      throw new ApiError(0, "a prompt round-trip is already in flight");
    }
    if (!text.trim()) {
      throw new ApiError(0, "prompt must not be empty");
    }
    state.busy = true;
    try {
      const promptResp = await this.client.submitPrompt(state.sessionId, text, provider);
      const plan = await this.client.plan(state.sessionId, "mha", state.params);
      const field = await this.client.getField(state.sessionId);
      const entry: HistoryEntry = {
        prompt: text,
        provider,
        before: promptResp.before,
        after: promptResp.posteriors,
        lengthM: plan.length_m,
        mdoM: plan.mdo_m,
        expansions: plan.expansions,
        fieldVersion: promptResp.field_version,
      };
      state.posteriors = promptResp.posteriors;
      state.field = field;
      state.fieldVersion = field.version;
      state.path = plan;
      state.history = [...state.history, entry];
      state.error = null;
      return entry;
    } catch (err) {
      state.error = err instanceof Error ? err.message : String(err);
      throw err;
    } finally {
      state.busy = false;
    }
  }

  private requireState(): ViewState {
    if (this.state === null) {
      throw new ApiError(0, "no active session; load a scene first");
    }
    return this.state;
  }
}
