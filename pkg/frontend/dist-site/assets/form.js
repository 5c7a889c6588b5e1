/**
 * Schema-driven feature form. One control per feature: categorical
 * features get a fixed-choice dropdown with exactly the schema's levels,
 * numeric features a free input with the observed training range as a
 * hint. Submit stays disabled until every field validates.
 */
function numericHint(entry) {
    if (entry.observed_min === null || entry.observed_max === null)
        return "";
    return `observed ${entry.observed_min.toPrecision(4)} to ${entry.observed_max.toPrecision(4)}`;
}
export function renderFeatureForm(doc, schema) {
    const root = doc.createElement("div");
    root.className = "feature-form";
    const listeners = [];
    const inputs = new Map();
    const rows = new Map();
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
        }
        else {
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
    function validateNumeric(input, row) {
        const ok = input.value.trim() !== "" && Number.isFinite(Number(input.value));
        row.classList.toggle("invalid", !ok);
        return ok;
    }
    function isValid() {
        for (const entry of schema) {
            const control = inputs.get(entry.name);
            if (entry.kind === "numeric") {
                const input = control;
                if (input.value.trim() === "" || !Number.isFinite(Number(input.value)))
                    return false;
            }
            else if (!control.value) {
                return false;
            }
        }
        return true;
    }
    function values() {
        if (!isValid())
            return null;
        const out = {};
        for (const entry of schema) {
            const control = inputs.get(entry.name);
            out[entry.name] =
                entry.kind === "numeric" ? Number(control.value) : control.value;
        }
        return out;
    }
    function notify() {
        for (const listener of listeners)
            listener();
    }
    return {
        root,
        values,
        isValid,
        onChange: (listener) => listeners.push(listener),
        highlightErrors: (fields) => {
            for (const name of fields)
                rows.get(name)?.classList.add("invalid");
        },
    };
}
