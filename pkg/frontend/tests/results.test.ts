import { describe, expect, it } from "vitest";

import { formatPercent, renderResult } from "../src/results.js";
import { renderSurvival } from "../src/survival.js";
import { METRICS, PREDICT_RESPONSE, SURVIVAL_RESPONSE } from "./stubs.js";

describe("renderResult", () => {
  it("renders the four panels", () => {
    const view = renderResult(document, PREDICT_RESPONSE);
    expect(view.querySelector(".decision-panel")).not.toBeNull();
    expect(view.querySelector(".algorithm-panel")).not.toBeNull();
    expect(view.querySelector(".confusion-panel")).not.toBeNull();
    expect(view.querySelector(".metrics-panel")).not.toBeNull();
  });

  it("shows the decision label and score from the response", () => {
    const view = renderResult(document, PREDICT_RESPONSE);
    expect(view.querySelector(".decision-badge")?.textContent).toBe("HIGH RISK");
    expect(view.querySelector(".decision-score")?.textContent).toContain(
      PREDICT_RESPONSE.score.toFixed(3),
    );
  });

  it("renders the confusion cells verbatim", () => {
    const view = renderResult(document, PREDICT_RESPONSE);
    const cells = [...view.querySelectorAll("table.confusion td.cell")].map(
      (c) => c.textContent,
    );
    expect(cells).toEqual(["27", "3", "6", "24"]); // tp fn / fp tn
  });

  it("formats metrics as one-decimal percents (88.7% style)", () => {
    expect(formatPercent(METRICS.sensitivity)).toBe("88.7%");
    const view = renderResult(document, PREDICT_RESPONSE);
    const texts = [...view.querySelectorAll(".metrics-panel text")].map((t) => t.textContent);
    expect(texts).toContain("88.7%");
    expect(texts).toContain("70.2%");
  });

  it("displays only API-sourced numbers", () => {
    // Every numeric token in the rendered panels must be derivable from
    // the prediction response: the console computes no statistics.
    const view = renderResult(document, PREDICT_RESPONSE);
    const allowed = new Set<string>();
    const m = PREDICT_RESPONSE.metrics;
    for (const value of [m.sensitivity, m.specificity, m.auc, m.accuracy]) {
      allowed.add(formatPercent(value));
    }
    for (const value of Object.values(m.confusion)) allowed.add(String(value));
    allowed.add(PREDICT_RESPONSE.score.toFixed(3));
    allowed.add(String(PREDICT_RESPONSE.algorithm.seed));
    allowed.add(String(m.fold_count));
    for (const value of Object.values(PREDICT_RESPONSE.algorithm.hyperparameters)) {
      allowed.add(String(value));
    }

    const leafTexts = (node: Node): string[] =>
      node.nodeType === Node.TEXT_NODE
        ? [node.textContent ?? ""]
        : [...node.childNodes].flatMap(leafTexts);
    const tokens = leafTexts(view).flatMap((t) => t.match(/\d+(?:\.\d+)?%?/g) ?? []);
    for (const token of tokens) {
      const hit =
        allowed.has(token) ||
        [...allowed].some((a) => a.includes(token)); // "0.813" inside "risk score 0.813"
      expect(hit, `rendered number ${token} has no API source`).toBe(true);
    }
    expect(tokens.length).toBeGreaterThan(6);
  });

  it("renders warnings when the service substituted a level", () => {
    const withWarning = {
      ...PREDICT_RESPONSE,
      warnings: ["stage: unseen level 'v' replaced by 'i'"],
    };
    const view = renderResult(document, withWarning);
    expect(view.querySelector(".warning")?.textContent).toContain("unseen level");
  });
});

describe("renderSurvival", () => {
  it("draws one step line per level and shows the log-rank p", () => {
    const view = renderSurvival(document, SURVIVAL_RESPONSE);
    expect(view.querySelectorAll(".km-line").length).toBe(2);
    expect(view.querySelector(".panel-title")?.textContent).toContain("<0.001");
    const legend = view.querySelector(".km-legend")?.textContent ?? "";
    expect(legend).toContain("i: n=18");
    expect(legend).toContain("median 12.0 mo");
  });
});
