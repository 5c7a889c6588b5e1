/**
 * Result panels: decision label + score, algorithm detail, the 2x2
 * confusion table and an SVG bar figure of the cell metrics. The console
 * computes no statistics of its own; every number rendered here is read
 * from the prediction response.
 */
export function formatPercent(value) {
    return `${(value * 100).toFixed(1)}%`;
}
export function formatScore(value) {
    return value.toFixed(3);
}
function el(doc, tag, className, text) {
    const node = doc.createElement(tag);
    node.className = className;
    if (text !== undefined)
        node.textContent = text;
    return node;
}
function decisionPanel(doc, response) {
    const panel = el(doc, "section", "panel decision-panel");
    panel.appendChild(el(doc, "h3", "panel-title", "Decision"));
    const badge = el(doc, "div", `decision-badge ${response.label === "high_risk" ? "high" : "low"}`, response.label === "high_risk" ? "HIGH RISK" : "LOW RISK");
    panel.appendChild(badge);
    panel.appendChild(el(doc, "div", "decision-score", `risk score ${formatScore(response.score)}`));
    for (const warning of response.warnings) {
        panel.appendChild(el(doc, "div", "warning", warning));
    }
    return panel;
}
function algorithmPanel(doc, response) {
    const panel = el(doc, "section", "panel algorithm-panel");
    panel.appendChild(el(doc, "h3", "panel-title", "Algorithm detail"));
    const list = doc.createElement("dl");
    const rows = [
        ["kind", response.algorithm.kind],
        ["training seed", String(response.algorithm.seed)],
        ["folds", String(response.metrics.fold_count)],
    ];
    for (const [key, value] of Object.entries(response.algorithm.hyperparameters)) {
        rows.push([key, String(value)]);
    }
    for (const [key, value] of rows) {
        list.appendChild(el(doc, "dt", "detail-key", key));
        list.appendChild(el(doc, "dd", "detail-value", value));
    }
    panel.appendChild(list);
    return panel;
}
function confusionPanel(doc, response) {
    const panel = el(doc, "section", "panel confusion-panel");
    panel.appendChild(el(doc, "h3", "panel-title", "Confusion table"));
    const { tp, fn, tn, fp } = response.metrics.confusion;
    const table = doc.createElement("table");
    table.className = "confusion";
    const header = doc.createElement("tr");
    for (const caption of ["", "pred. high", "pred. low"]) {
        header.appendChild(el(doc, "th", "", caption));
    }
    table.appendChild(header);
    const rows = [
        ["actual high", tp, fn, "tp-fn"],
        ["actual low", fp, tn, "fp-tn"],
    ];
    for (const [caption, a, b, cls] of rows) {
        const tr = doc.createElement("tr");
        tr.className = cls;
        tr.appendChild(el(doc, "th", "", caption));
        tr.appendChild(el(doc, "td", "cell", String(a)));
        tr.appendChild(el(doc, "td", "cell", String(b)));
        table.appendChild(tr);
    }
    panel.appendChild(table);
    return panel;
}
function metricsFigure(doc, response) {
    const panel = el(doc, "section", "panel metrics-panel");
    panel.appendChild(el(doc, "h3", "panel-title", "Cross-validated metrics"));
    const svgns = "http://www.w3.org/2000/svg";
    const width = 320;
    const barHeight = 22;
    const gap = 10;
    const metrics = [
        ["sensitivity", response.metrics.sensitivity],
        ["specificity", response.metrics.specificity],
        ["AUC", response.metrics.auc],
        ["accuracy", response.metrics.accuracy],
    ];
    const svg = doc.createElementNS(svgns, "svg");
    svg.setAttribute("width", String(width));
    svg.setAttribute("height", String(metrics.length * (barHeight + gap)));
    svg.setAttribute("class", "metrics-figure");
    metrics.forEach(([name, value], index) => {
        const y = index * (barHeight + gap);
        const bar = doc.createElementNS(svgns, "rect");
        bar.setAttribute("x", "95");
        bar.setAttribute("y", String(y));
        bar.setAttribute("height", String(barHeight));
        bar.setAttribute("width", String(Math.max(1, Math.round(value * 180))));
        bar.setAttribute("class", "metric-bar");
        const caption = doc.createElementNS(svgns, "text");
        caption.setAttribute("x", "0");
        caption.setAttribute("y", String(y + barHeight - 6));
        caption.setAttribute("class", "metric-name");
        caption.textContent = name;
        const valueText = doc.createElementNS(svgns, "text");
        valueText.setAttribute("x", String(95 + Math.max(1, Math.round(value * 180)) + 6));
        valueText.setAttribute("y", String(y + barHeight - 6));
        valueText.setAttribute("class", "metric-value");
        valueText.textContent = formatPercent(value);
        svg.appendChild(bar);
        svg.appendChild(caption);
        svg.appendChild(valueText);
    });
    panel.appendChild(svg);
    return panel;
}
export function renderResult(doc, response) {
    const view = el(doc, "div", "result-view");
    view.appendChild(decisionPanel(doc, response));
    view.appendChild(algorithmPanel(doc, response));
    view.appendChild(confusionPanel(doc, response));
    view.appendChild(metricsFigure(doc, response));
    return view;
}
