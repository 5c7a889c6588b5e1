/**
 * Kaplan-Meier tab: SVG step curves with confidence bands per level plus
 * the log-rank p straight from /api/survival.
 */
const PALETTE = ["#2563eb", "#dc2626", "#059669", "#d97706", "#7c3aed", "#0891b2"];
const WIDTH = 560;
const HEIGHT = 300;
const MARGIN = { left: 48, right: 16, top: 12, bottom: 36 };
function stepPath(times, values, x, y) {
    let d = `M ${x(0)} ${y(1)}`;
    let prev = 1;
    for (let i = 0; i < times.length; i++) {
        d += ` L ${x(times[i])} ${y(prev)} L ${x(times[i])} ${y(values[i])}`;
        prev = values[i];
    }
    return d;
}
export function formatP(p) {
    if (p === null)
        return "n/a";
    if (p < 0.001)
        return "<0.001";
    return p.toFixed(3);
}
export function renderSurvival(doc, data) {
    const container = doc.createElement("div");
    container.className = "survival-view";
    const heading = doc.createElement("h3");
    heading.className = "panel-title";
    heading.textContent = `Kaplan-Meier: ${data.parameter} (log-rank p ${formatP(data.p)})`;
    container.appendChild(heading);
    const maxTime = Math.max(1, ...data.levels.flatMap((lv) => lv.times));
    const x = (t) => MARGIN.left + (t / maxTime) * (WIDTH - MARGIN.left - MARGIN.right);
    const y = (s) => MARGIN.top + (1 - s) * (HEIGHT - MARGIN.top - MARGIN.bottom);
    const svgns = "http://www.w3.org/2000/svg";
    const svg = doc.createElementNS(svgns, "svg");
    svg.setAttribute("width", String(WIDTH));
    svg.setAttribute("height", String(HEIGHT));
    svg.setAttribute("class", "km-figure");
    // axes
    const axis = doc.createElementNS(svgns, "path");
    axis.setAttribute("d", `M ${MARGIN.left} ${MARGIN.top} L ${MARGIN.left} ${HEIGHT - MARGIN.bottom} L ${WIDTH - MARGIN.right} ${HEIGHT - MARGIN.bottom}`);
    axis.setAttribute("class", "km-axis");
    axis.setAttribute("fill", "none");
    svg.appendChild(axis);
    for (const tick of [0, 0.5, 1]) {
        const label = doc.createElementNS(svgns, "text");
        label.setAttribute("x", String(MARGIN.left - 8));
        label.setAttribute("y", String(y(tick) + 4));
        label.setAttribute("text-anchor", "end");
        label.setAttribute("class", "km-tick");
        label.textContent = tick.toFixed(1);
        svg.appendChild(label);
    }
    data.levels.forEach((level, index) => {
        const color = PALETTE[index % PALETTE.length];
        if (level.times.length > 0) {
            const band = doc.createElementNS(svgns, "path");
            let d = "";
            level.times.forEach((t, i) => {
                d += `${d ? " L" : "M"} ${x(t)} ${y(level.ucl[i])}`;
            });
            for (let i = level.times.length - 1; i >= 0; i--) {
                d += ` L ${x(level.times[i])} ${y(level.lcl[i])}`;
            }
            band.setAttribute("d", d + " Z");
            band.setAttribute("fill", color);
            band.setAttribute("opacity", "0.12");
            svg.appendChild(band);
            const line = doc.createElementNS(svgns, "path");
            line.setAttribute("d", stepPath(level.times, level.survival, x, y));
            line.setAttribute("stroke", color);
            line.setAttribute("fill", "none");
            line.setAttribute("stroke-width", "2");
            line.setAttribute("class", "km-line");
            svg.appendChild(line);
        }
    });
    container.appendChild(svg);
    const legend = doc.createElement("ul");
    legend.className = "km-legend";
    data.levels.forEach((level, index) => {
        const item = doc.createElement("li");
        item.style.color = PALETTE[index % PALETTE.length];
        const median = level.median.median === null ? "median n/a" : `median ${level.median.median.toFixed(1)} mo`;
        item.textContent = `${level.level}: n=${level.n}, events=${level.events}, ${median}`;
        legend.appendChild(item);
    });
    container.appendChild(legend);
    return container;
}
