/**
 * Console controller: scenario/algorithm pickers fed by /api/models, a
 * schema-driven feature form per scenario, the prediction result view and
 * a Kaplan-Meier tab. At most one prediction request is in flight; a new
 * submission cancels the current one.
 */
import { ApiRequestError } from "./api.js";
import { renderFeatureForm } from "./form.js";
import { renderResult } from "./results.js";
import { renderSurvival } from "./survival.js";
export class ConsoleApp {
    constructor(doc, root, api) {
        this.root = root;
        this.api = api;
        this.form = null;
        this.schema = [];
        this.cells = [];
        this.inFlight = null;
        this.doc = doc;
        root.innerHTML = "";
        const tabs = this.el("nav", "tabs");
        const predictButton = this.el("button", "tab-button active", "Predict");
        const survivalButton = this.el("button", "tab-button", "Survival curves");
        tabs.append(predictButton, survivalButton);
        root.appendChild(tabs);
        this.errorBanner = this.el("div", "error-banner hidden");
        root.appendChild(this.errorBanner);
        this.predictTab = this.el("div", "tab predict-tab");
        const controls = this.el("div", "controls");
        this.scenarioSelect = this.doc.createElement("select");
        this.scenarioSelect.className = "scenario-select";
        this.algorithmSelect = this.doc.createElement("select");
        this.algorithmSelect.className = "algorithm-select";
        this.submitButton = this.doc.createElement("button");
        this.submitButton.className = "submit-button";
        this.submitButton.textContent = "Predict";
        this.submitButton.disabled = true;
        controls.append(this.labelled("scenario", this.scenarioSelect), this.labelled("algorithm", this.algorithmSelect), this.submitButton);
        this.predictTab.appendChild(controls);
        this.formHost = this.el("div", "form-host");
        this.resultHost = this.el("div", "result-host");
        this.predictTab.append(this.formHost, this.resultHost);
        root.appendChild(this.predictTab);
        this.survivalTab = this.el("div", "tab survival-tab hidden");
        this.parameterSelect = this.doc.createElement("select");
        this.parameterSelect.className = "parameter-select";
        this.survivalTab.appendChild(this.labelled("clinical parameter", this.parameterSelect));
        this.survivalHost = this.el("div", "survival-host");
        this.survivalTab.appendChild(this.survivalHost);
        root.appendChild(this.survivalTab);
        predictButton.addEventListener("click", () => {
            predictButton.classList.add("active");
            survivalButton.classList.remove("active");
            this.predictTab.classList.remove("hidden");
            this.survivalTab.classList.add("hidden");
        });
        survivalButton.addEventListener("click", () => {
            survivalButton.classList.add("active");
            predictButton.classList.remove("active");
            this.survivalTab.classList.remove("hidden");
            this.predictTab.classList.add("hidden");
            void this.loadSurvival();
        });
        this.scenarioSelect.addEventListener("change", () => void this.loadScenario());
        this.submitButton.addEventListener("click", () => void this.submit());
        this.parameterSelect.addEventListener("change", () => void this.loadSurvival());
    }
    el(tag, className, text) {
        const node = this.doc.createElement(tag);
        node.className = className;
        if (text !== undefined)
            node.textContent = text;
        return node;
    }
    labelled(caption, control) {
        const wrap = this.el("label", "control");
        wrap.appendChild(this.el("span", "control-caption", caption));
        wrap.appendChild(control);
        return wrap;
    }
    showError(message, retry) {
        this.errorBanner.innerHTML = "";
        this.errorBanner.classList.remove("hidden");
        this.errorBanner.appendChild(this.el("span", "error-text", message));
        if (retry) {
            const button = this.doc.createElement("button");
            button.className = "retry-button";
            button.textContent = "Retry";
            button.addEventListener("click", () => {
                this.clearError();
                retry();
            });
            this.errorBanner.appendChild(button);
        }
    }
    clearError() {
        this.errorBanner.classList.add("hidden");
        this.errorBanner.innerHTML = "";
    }
    async init() {
        try {
            const roster = await this.api.models();
            this.cells = roster.models;
        }
        catch (error) {
            this.showError(`cannot reach the service: ${String(error)}`, () => void this.init());
            return;
        }
        const scenarios = [...new Set(this.cells.map((c) => c.scenario))];
        this.fillSelect(this.scenarioSelect, scenarios);
        await this.loadScenario();
    }
    fillSelect(select, options) {
        select.innerHTML = "";
        for (const value of options) {
            const option = this.doc.createElement("option");
            option.value = value;
            option.textContent = value;
            select.appendChild(option);
        }
    }
    get scenario() {
        return this.scenarioSelect.value;
    }
    async loadScenario() {
        const scenario = this.scenario;
        this.fillSelect(this.algorithmSelect, this.cells.filter((c) => c.scenario === scenario).map((c) => c.algorithm));
        try {
            const response = await this.api.features(scenario);
            this.schema = response.features;
        }
        catch (error) {
            this.showError(`failed to fetch the feature schema: ${String(error)}`, () => void this.loadScenario());
            return;
        }
        this.clearError();
        this.formHost.innerHTML = "";
        this.form = renderFeatureForm(this.doc, this.schema);
        this.form.onChange(() => {
            this.submitButton.disabled = !this.form.isValid();
        });
        this.submitButton.disabled = !this.form.isValid();
        this.formHost.appendChild(this.form.root);
    }
    async submit() {
        if (!this.form)
            return;
        const features = this.form.values();
        if (features === null)
            return;
        // cancel semantics: a newer submission wins
        this.inFlight?.abort();
        const controller = new AbortController();
        this.inFlight = controller;
        this.submitButton.classList.add("busy");
        try {
            const response = await this.api.predict({ scenario: this.scenario, algorithm: this.algorithmSelect.value, features }, controller.signal);
            this.clearError();
            this.resultHost.innerHTML = "";
            this.resultHost.appendChild(renderResult(this.doc, response));
        }
        catch (error) {
            if (controller.signal.aborted)
                return; // superseded, keep quiet
            if (error instanceof ApiRequestError) {
                this.form.highlightErrors(error.body.fields);
                this.showError(`${error.body.code}: ${error.body.message}`);
            }
            else {
                // network failure: preserve inputs, non-destructive error state
                this.showError(`network failure: ${String(error)}`);
            }
        }
        finally {
            if (this.inFlight === controller) {
                this.inFlight = null;
                this.submitButton.classList.remove("busy");
            }
        }
    }
    async loadSurvival() {
        if (this.parameterSelect.options.length === 0) {
            // clinical categorical features double as the KM parameter list
            const clinical = this.schema.filter((f) => f.kind === "categorical").map((f) => f.name);
            this.fillSelect(this.parameterSelect, clinical);
        }
        const parameter = this.parameterSelect.value;
        if (!parameter)
            return;
        try {
            const data = await this.api.survival(parameter);
            this.survivalHost.innerHTML = "";
            this.survivalHost.appendChild(renderSurvival(this.doc, data));
            this.clearError();
        }
        catch (error) {
            this.showError(`failed to fetch survival curves: ${String(error)}`);
        }
    }
}
