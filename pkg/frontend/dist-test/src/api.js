export class ApiError extends Error {
    constructor(status, code, message, field) {
        super(message);
        this.status = status;
        this.code = code;
        this.field = field;
    }
}
export class ApiClient {
    constructor(baseUrl, fetchFn = (input, init) => fetch(input, init)) {
        this.baseUrl = baseUrl;
        this.fetchFn = fetchFn;
    }
    async request(path, init) {
        const resp = await this.fetchFn(`${this.baseUrl}${path}`, init);
        if (!resp.ok) {
            let body = { code: "http-error", message: `HTTP ${resp.status}` };
            try {
                body = (await resp.json());
            }
            catch {
                // non-JSON error body; keep the fallback
            }
            throw new ApiError(resp.status, body.code, body.message, body.field);
        }
        return (await resp.json());
    }
    post(path, payload) {
        return this.request(path, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(payload),
        });
    }
    createSession(kb, mode) {
        return this.post("/sessions", { kb, mode });
    }
    getSession(id) {
        return this.request(`/sessions/${id}`);
    }
    openProbe(id, reported) {
        return this.post(`/sessions/${id}/open-probe`, { reported });
    }
    answer(id, symptom, state) {
        return this.post(`/sessions/${id}/answers`, { symptom, state });
    }
    questions(id, k) {
        return this.request(`/sessions/${id}/questions?k=${k}`);
    }
    differential(id) {
        return this.request(`/sessions/${id}/differential`);
    }
    params(id) {
        return this.request(`/sessions/${id}/params`);
    }
    healthz() {
        return this.request("/healthz");
    }
}
