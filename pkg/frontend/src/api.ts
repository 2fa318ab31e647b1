/**
 * Typed client for the promptnav /v1 session API.
 *
 * Every request/response pair is appended to `log`, so callers can prove that
 * displayed values came from the server rather than local computation.
 */

export interface SceneSummary {
  session: string;
  cols: number;
  rows: number;
  resolution_m: number;
  start_cell: [number, number];
  goal_cell: [number, number];
  blocked: [number, number][];
  posteriors: Record<string, number>;
  field_version: number;
  history_len: number;
  state_hash: string;
}

export interface FieldSnapshot {
  cols: number;
  rows: number;
  resolution_m: number;
  values: number[];
  version: number;
}

export interface PromptResponse {
  posteriors: Record<string, number>;
  before: Record<string, number>;
  likelihoods: Record<string, number>;
  field_version: number;
}

export interface PlanResponse {
  cells: [number, number][];
  cost: number;
  length_m: number;
  mdo_m: number | null;
  planner: string;
  strategy: string;
  expansions: number;
  field_version: number;
  params: Record<string, unknown>;
}

export interface PlannerParams {
  w1?: number;
  w2?: number;
  lambda?: number;
  beta?: number;
  cost_mode?: "heuristic_only" | "cost_augmented";
}

export interface RequestLogEntry {
  method: string;
  path: string;
  status: number;
  body: unknown;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  readonly log: RequestLogEntry[] = [];

  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  async createScene(doc: unknown): Promise<{ session: string; posteriors: Record<string, number>; field_version: number }> {
    return this.request("POST", "/v1/scenes", doc);
  }

  async getScene(id: string): Promise<SceneSummary> {
    return this.request("GET", `/v1/scenes/${id}`);
  }

  async submitPrompt(id: string, text: string, provider: string): Promise<PromptResponse> {
    return this.request("POST", `/v1/scenes/${id}/prompts`, { text, provider });
  }

  async getField(id: string): Promise<FieldSnapshot> {
    return this.request("GET", `/v1/scenes/${id}/field`);
  }

  async plan(id: string, strategy: "baseline" | "mha", params: PlannerParams): Promise<PlanResponse> {
    return this.request("POST", `/v1/scenes/${id}/plan`, { strategy, params });
  }

  async coefficients(id: string): Promise<unknown> {
    return this.request("GET", `/v1/scenes/${id}/coefficients`);
  }

  async reset(id: string): Promise<{ posteriors: Record<string, number>; field_version: number }> {
    return this.request("POST", `/v1/scenes/${id}/reset`);
  }

  async healthz(): Promise<{ status: string }> {
    return this.request("GET", "/healthz");
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, {
        method,
        headers: body === undefined ? {} : { "Content-Type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiError(0, `server unreachable: ${String(err)}`);
    }
    let payload: unknown = null;
    try {
      payload = await response.json();
    } catch {
      payload = null;
    }
    this.log.push({ method, path, status: response.status, body: payload });
    if (!response.ok) {
      const detail =
        payload && typeof payload === "object" && "error" in payload
          ? String((payload as { error: unknown }).error)
          : `HTTP ${response.status}`;
      throw new ApiError(response.status, detail);
    }
    return payload as T;
  }
}
