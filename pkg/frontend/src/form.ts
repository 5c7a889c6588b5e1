/**
 * Schema-driven feature form. One control per feature: categorical
 * features get a fixed-choice dropdown with exactly the schema's levels,
 * numeric features a free input with the observed training range as a
 * hint. Submit stays disabled until every field validates.
 */

import type { FeatureSchemaEntry } from "./api.js";

export interface FormController {
  root: HTMLElement;
  /** Current values; null while any field is invalid. */
  values(): Record<string, string | number> | null;
  isValid(): boolean;
  onChange(listener: () => void): void;
  /** Mark server-rejected fields (400 responses) with an error state. */
  highlightErrors(fields: string[]): void;
}

function numericHint(entry: FeatureSchemaEntry): string {
  if (entry.observed_min === null || entry.observed_max === null) return "";
  return `observed ${entry.observed_min.toPrecision(4)} to ${entry.observed_max.toPrecision(4)}`;
}

export function renderFeatureForm(
  doc: Document,
  schema: FeatureSchemaEntry[],
): FormController {
  const root = doc.createElement("div");
  root.className = "feature-form";
  const listeners: Array<() => void> = [];
  const inputs = new Map<string, HTMLInputElement | HTMLSelectElement>();
  const rows = new Map<string, HTMLElement>();

  for (const entry of schema) {
    const row = doc.createElement("label");
    row.className = "feature-row";
    row.dataset.feature = entry.name;
    row.dataset.kind = entry.kind;

    const caption = doc.createElement("span");
    caption.className = "feature-name";
    caption.textContent = entry.name;
    row.appendChild(caption);

    if (entry.kind === "categorical") {
      const select = doc.createElement("select");
      select.name = entry.name;
      for (const level of entry.levels ?? []) {
        const option = doc.createElement("option");
        option.value = level;
        option.textContent = level;
        select.appendChild(option);
      }
      select.addEventListener("change", () => notify());
      inputs.set(entry.name, select);
      row.appendChild(select);
    } else {
      const input = doc.createElement("input");
      input.type = "number";
      input.name = entry.name;
      input.step = "any";
      input.placeholder = numericHint(entry);
      input.addEventListener("input", () => {
        validateNumeric(input, row);
        notify();
      });
      const hint = doc.createElement("small");
      hint.className = "feature-hint";
      hint.textContent = numericHint(entry);
      inputs.set(entry.name, input);
      row.appendChild(input);
      row.appendChild(hint);
    }
    rows.set(entry.name, row);
    root.appendChild(row);
  }

  function validateNumeric(input: HTMLInputElement, row: HTMLElement): boolean {
    const ok = input.value.trim() !== "" && Number.isFinite(Number(input.value));
    row.classList.toggle("invalid", !ok);
    return ok;
  }

  function isValid(): boolean {
    for (const entry of schema) {
      const control = inputs.get(entry.name)!;
      if (entry.kind === "numeric") {
        const input = control as HTMLInputElement;
        if (input.value.trim() === "" || !Number.isFinite(Number(input.value))) return false;
      } else if (!(control as HTMLSelectElement).value) {
        return false;
      }
    }
    return true;
  }

  function values(): Record<string, string | number> | null {
    if (!isValid()) return null;
    const out: Record<string, string | number> = {};
    for (const entry of schema) {
      const control = inputs.get(entry.name)!;
      out[entry.name] =
        entry.kind === "numeric" ? Number((control as HTMLInputElement).value) : control.value;
    }
    return out;
  }

  function notify(): void {
    for (const listener of listeners) listener();
  }

  return {
    root,
    values,
    isValid,
    onChange: (listener) => listeners.push(listener),
    highlightErrors: (fields) => {
      for (const name of fields) rows.get(name)?.classList.add("invalid");
    },
  };
}
