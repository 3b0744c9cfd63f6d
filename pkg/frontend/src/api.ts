// Typed fetch client for the session service. The fetch function is
// injectable so tests can run against a fake or a locally spawned service.
import type {
  DifferentialView,
  ParamsView,
  QuestionsView,
  ServiceErrorBody,
  SessionResource,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public field?: string,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (!resp.ok) {
      let body: ServiceErrorBody = { code: "http-error", message: `HTTP ${resp.status}` };
      try {
        body = (await resp.json()) as ServiceErrorBody;
      } catch {
        // non-JSON error body; keep the fallback
      }
      throw new ApiError(resp.status, body.code, body.message, body.field);
    }
    return (await resp.json()) as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  createSession(kb: string, mode: string): Promise<SessionResource> {
    return this.post("/sessions", { kb, mode });
  }

  getSession(id: string): Promise<SessionResource> {
    return this.request(`/sessions/${id}`);
  }

  openProbe(id: string, reported: Record<string, string>): Promise<DifferentialView> {
    return this.post(`/sessions/${id}/open-probe`, { reported });
  }

  answer(id: string, symptom: string, state: string): Promise<DifferentialView> {
    return this.post(`/sessions/${id}/answers`, { symptom, state });
  }

  questions(id: string, k: number): Promise<QuestionsView> {
    return this.request(`/sessions/${id}/questions?k=${k}`);
  }

  differential(id: string): Promise<DifferentialView> {
    return this.request(`/sessions/${id}/differential`);
  }

  params(id: string): Promise<ParamsView & { session: string }> {
    return this.request(`/sessions/${id}/params`);
  }

  healthz(): Promise<{ status: string; kbs: string[] }> {
    return this.request("/healthz");
  }
}
