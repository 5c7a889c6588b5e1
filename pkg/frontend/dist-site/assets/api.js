/**
 * Typed client for the oncodss /api endpoints. Every number shown in the
 * console originates from one of these responses.
 */
export class ApiRequestError extends Error {
    constructor(status, body) {
        super(`${body.code}: ${body.message}`);
        this.status = status;
        this.body = body;
    }
}
async function asJson(response) {
    if (!response.ok) {
        let body;
        try {
            body = (await response.json());
        }
        catch {
            body = { code: "HTTP_" + response.status, message: response.statusText, fields: [] };
        }
        throw new ApiRequestError(response.status, body);
    }
    return (await response.json());
}
export class ApiClient {
    constructor(baseUrl = "") {
        this.baseUrl = baseUrl;
    }
    url(path, query) {
        const qs = query ? "?" + new URLSearchParams(query).toString() : "";
        return `${this.baseUrl}${path}${qs}`;
    }
    health() {
        return fetch(this.url("/api/health")).then((r) => asJson(r));
    }
    models() {
        return fetch(this.url("/api/models")).then((r) => asJson(r));
    }
    features(scenario, signal) {
        return fetch(this.url("/api/features", { scenario }), { signal }).then((r) => asJson(r));
    }
    metrics(scenario, algorithm) {
        return fetch(this.url("/api/metrics", { scenario, algorithm })).then((r) => asJson(r));
    }
    survival(parameter, signal) {
        return fetch(this.url("/api/survival", { parameter }), { signal }).then((r) => asJson(r));
    }
    predict(request, signal) {
        return fetch(this.url("/api/predict"), {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(request),
            signal,
        }).then((r) => asJson(r));
    }
}
