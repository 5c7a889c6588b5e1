/**
 * Typed client for the oncodss /api endpoints. Every number shown in the
 * console originates from one of these responses.
 */

export interface FeatureSchemaEntry {
  name: string;
  kind: "categorical" | "numeric";
  levels: string[] | null;
  observed_min: number | null;
  observed_max: number | null;
  mode_level: string | null;
}

export interface FeaturesResponse {
  scenario: string;
  features: FeatureSchemaEntry[];
}

export interface ModelCell {
  scenario: string;
  algorithm: string;
}

export interface Confusion {
  tp: number;
  fn: number;
  tn: number;
  fp: number;
}

export interface Metrics {
  scenario: string;
  algorithm: string;
  confusion: Confusion;
  sensitivity: number;
  specificity: number;
  accuracy: number;
  auc: number;
  fold_count: number;
  seed: number;
}

export interface PredictRequest {
  scenario: string;
  algorithm: string;
  features: Record<string, string | number>;
}

export interface PredictResponse {
  label: "high_risk" | "low_risk";
  score: number;
  warnings: string[];
  algorithm: {
    kind: string;
    hyperparameters: Record<string, number>;
    seed: number;
  };
  metrics: Metrics;
}

export interface SurvivalLevel {
  level: string;
  n: number;
  events: number;
  times: number[];
  survival: number[];
  lcl: number[];
  ucl: number[];
  median: {
    median: number | null;
    se: number | null;
    lcl: number | null;
    ucl: number | null;
  };
}

export interface SurvivalResponse {
  parameter: string;
  p: number | null;
  levels: SurvivalLevel[];
}

export interface ApiErrorBody {
  code: string;
  message: string;
  fields: string[];
}

export class ApiRequestError extends Error {
  constructor(
    readonly status: number,
    readonly body: ApiErrorBody,
  ) {
    super(`${body.code}: ${body.message}`);
  }
}

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let body: ApiErrorBody;
    try {
      body = (await response.json()) as ApiErrorBody;
    } catch {
      body = { code: "HTTP_" + response.status, message: response.statusText, fields: [] };
    }
    throw new ApiRequestError(response.status, body);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(readonly baseUrl: string = "") {}

  private url(path: string, query?: Record<string, string>): string {
    const qs = query ? "?" + new URLSearchParams(query).toString() : "";
    return `${this.baseUrl}${path}${qs}`;
  }

  health(): Promise<{ status: string; bundle_digest: string; version: string }> {
    return fetch(this.url("/api/health")).then((r) => asJson(r));
  }

  models(): Promise<{ models: ModelCell[] }> {
    return fetch(this.url("/api/models")).then((r) => asJson(r));
  }

  features(scenario: string, signal?: AbortSignal): Promise<FeaturesResponse> {
    return fetch(this.url("/api/features", { scenario }), { signal }).then((r) => asJson(r));
  }

  metrics(scenario: string, algorithm: string): Promise<Metrics> {
    return fetch(this.url("/api/metrics", { scenario, algorithm })).then((r) => asJson(r));
  }

  survival(parameter: string, signal?: AbortSignal): Promise<SurvivalResponse> {
    return fetch(this.url("/api/survival", { parameter }), { signal }).then((r) => asJson(r));
  }

  predict(request: PredictRequest, signal?: AbortSignal): Promise<PredictResponse> {
    return fetch(this.url("/api/predict"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
      signal,
    }).then((r) => asJson(r));
  }
}
