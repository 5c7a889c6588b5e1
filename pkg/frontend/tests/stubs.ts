/** Canned API payloads mirroring the service's wire shapes. */

import type {
  FeatureSchemaEntry,
  Metrics,
  PredictResponse,
  SurvivalResponse,
} from "../src/api.js";

export const CLINICAL_SCHEMA: FeatureSchemaEntry[] = [
  {
    name: "stage",
    kind: "categorical",
    levels: ["i", "ii", "iii", "iv"],
    observed_min: null,
    observed_max: null,
    mode_level: "i",
  },
  {
    name: "t_category",
    kind: "categorical",
    levels: ["T1", "Other"],
    observed_min: null,
    observed_max: null,
    mode_level: "T1",
  },
  {
    name: "dimension",
    kind: "categorical",
    levels: ["<0.7", ">=0.7"],
    observed_min: null,
    observed_max: null,
    mode_level: ">=0.7",
  },
];

function numericFeature(name: string, lo: number, hi: number): FeatureSchemaEntry {
  return {
    name,
    kind: "numeric",
    levels: null,
    observed_min: lo,
    observed_max: hi,
    mode_level: null,
  };
}

export const NICOTINE_SCHEMA: FeatureSchemaEntry[] = [
  ...CLINICAL_SCHEMA,
  numericFeature("GRIA1", 0, 3421),
  numericFeature("CACNA1A", 1.5, 250.25),
];

export const KRAS_SCHEMA: FeatureSchemaEntry[] = [
  ...CLINICAL_SCHEMA,
  numericFeature("KRT5", 0.2, 812),
  numericFeature("WNT16", 4, 96.5),
];

export const ALL_SCHEMA: FeatureSchemaEntry[] = [
  ...CLINICAL_SCHEMA,
  numericFeature("GRIA1", 0, 3421),
  numericFeature("CACNA1A", 1.5, 250.25),
  numericFeature("KRT5", 0.2, 812),
  numericFeature("WNT16", 4, 96.5),
];

export const SCHEMAS_BY_SCENARIO: Record<string, FeatureSchemaEntry[]> = {
  clinical_only: CLINICAL_SCHEMA,
  clinical_nicotine: NICOTINE_SCHEMA,
  clinical_kras: KRAS_SCHEMA,
  all_parameters: ALL_SCHEMA,
};

export const METRICS: Metrics = {
  scenario: "clinical_nicotine",
  algorithm: "decision_tree",
  confusion: { tp: 27, fn: 3, tn: 24, fp: 6 },
  sensitivity: 0.887,
  specificity: 0.62,
  accuracy: 0.702,
  auc: 0.596,
  fold_count: 10,
  seed: 4242,
};

export const PREDICT_RESPONSE: PredictResponse = {
  label: "high_risk",
  score: 0.8125,
  warnings: [],
  algorithm: {
    kind: "decision_tree",
    hyperparameters: { max_depth: 6, min_samples_leaf: 5 },
    seed: 4242,
  },
  metrics: METRICS,
};

export const SURVIVAL_RESPONSE: SurvivalResponse = {
  parameter: "stage",
  p: 0.0004,
  levels: [
    {
      level: "i",
      n: 18,
      events: 4,
      times: [10, 20, 30, 40],
      survival: [0.94, 0.88, 0.77, 0.61],
      lcl: [0.82, 0.72, 0.58, 0.4],
      ucl: [0.98, 0.95, 0.89, 0.78],
      median: { median: null, se: null, lcl: null, ucl: null },
    },
    {
      level: "iv",
      n: 12,
      events: 10,
      times: [5, 12, 22],
      survival: [0.75, 0.42, 0.08],
      lcl: [0.5, 0.2, 0.01],
      ucl: [0.9, 0.64, 0.35],
      median: { median: 12, se: 4.1, lcl: 5, ucl: 22 },
    },
  ],
};

export const MODELS_RESPONSE = {
  models: Object.keys(SCHEMAS_BY_SCENARIO).flatMap((scenario) =>
    ["decision_tree", "naive_bayes"].map((algorithm) => ({ scenario, algorithm })),
  ),
};

export function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

/** fetch stub routing on path; unknown paths 404 with the service shape. */
export function routedFetch(
  overrides: Partial<
    Record<string, (url: URL, init?: RequestInit) => Response | Promise<Response>>
  > = {},
) {
  return (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = new URL(String(input), "http://console.test");
    const custom = overrides[url.pathname];
    if (custom) return Promise.resolve(custom(url, init));
    switch (url.pathname) {
      case "/api/models":
        return Promise.resolve(jsonResponse(MODELS_RESPONSE));
      case "/api/features": {
        const scenario = url.searchParams.get("scenario") ?? "";
        const schema = SCHEMAS_BY_SCENARIO[scenario];
        if (schema) return Promise.resolve(jsonResponse({ scenario, features: schema }));
        return Promise.resolve(
          jsonResponse(
            { code: "UNKNOWN_SCENARIO", message: `no scenario ${scenario}`, fields: ["scenario"] },
            404,
          ),
        );
      }
      case "/api/predict":
        return Promise.resolve(jsonResponse(PREDICT_RESPONSE));
      case "/api/survival":
        return Promise.resolve(jsonResponse(SURVIVAL_RESPONSE));
      default:
        return Promise.resolve(
          jsonResponse({ code: "NOT_FOUND", message: url.pathname, fields: [] }, 404),
        );
    }
  };
}
