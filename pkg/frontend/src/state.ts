// Console state machine. All numbers held here are raw service payload
// values; nothing is recomputed client-side. Every mutation waits for the
// service response (no optimistic updates) and then re-polls the dependent
// read endpoints.
import { ApiClient, ApiError } from "./api.js";
import type {
  DifferentialRow,
  LogEntry,
  ParamsView,
  QuestionRow,
  SymptomInfo,
} from "./types.js";

export interface ConsoleState {
  kb: string;
  mode: string;
  sessionId: string | null;
  phase: string;
  catalog: SymptomInfo[];
  differential: DifferentialRow[];
  questions: QuestionRow[];
  params: ParamsView | null;
  history: LogEntry[];
  k: number;
  logScale: boolean;
  busy: boolean;
  error: string | null;
}

export function initialState(): ConsoleState {
  return {
    kb: "",
    mode: "fixed-params",
    sessionId: null,
    phase: "",
    catalog: [],
    differential: [],
    questions: [],
    params: null,
    history: [],
    k: 3,
    logScale: false,
    busy: false,
    error: null,
  };
}

export class ConsoleApp {
  state: ConsoleState = initialState();

  constructor(
    private api: ApiClient,
    private onRender: (state: ConsoleState) => void = () => {},
  ) {}

  private render(): void {
    this.onRender(this.state);
  }

  private async guard<T>(work: () => Promise<T>): Promise<T | null> {
    this.state.busy = true;
    this.state.error = null;
    this.render();
    try {
      return await work();
    } catch (err) {
      if (err instanceof ApiError) {
        this.state.error = `${err.code}: ${err.message}`;
        if (err.status === 409 && this.state.sessionId) {
          await this.resync();
        }
      } else {
        this.state.error = String(err);
      }
      return null;
    } finally {
      this.state.busy = false;
      this.render();
    }
  }

  async newSession(kb: string, mode: string): Promise<void> {
    await this.guard(async () => {
      const resource = await this.api.createSession(kb, mode);
      this.state = {
        ...initialState(),
        kb,
        mode: resource.mode,
        sessionId: resource.id,
        phase: resource.phase,
        catalog: resource.catalog,
        differential: resource.differential,
        history: resource.evidence_log,
        params: resource.params ?? null,
        k: this.state.k,
        logScale: this.state.logScale,
      };
    });
  }

  async submitOpenProbe(reported: Record<string, string>): Promise<void> {
    const id = this.state.sessionId;
    if (!id || this.state.phase !== "awaiting-open-probe") return;
    await this.guard(async () => {
      const view = await this.api.openProbe(id, reported);
      this.state.phase = view.phase;
      this.state.differential = view.differential;
      this.state.history = [...this.state.history, { kind: "open-probe", response: reported }];
      await this.refreshAfterWrite(id);
    });
  }

  async submitAnswer(symptom: string, state: string): Promise<void> {
    const id = this.state.sessionId;
    if (!id) return;
    await this.guard(async () => {
      const view = await this.api.answer(id, symptom, state);
      this.state.phase = view.phase;
      this.state.differential = view.differential;
      this.state.history = [...this.state.history, { kind: "closed-probe", symptom, state }];
      await this.refreshAfterWrite(id);
    });
  }

  async setK(k: number): Promise<void> {
    this.state.k = Math.min(10, Math.max(1, Math.round(k)));
    const id = this.state.sessionId;
    if (id && this.state.phase === "refining") {
      await this.guard(async () => {
        const view = await this.api.questions(id, this.state.k);
        this.state.questions = view.questions;
      });
    } else {
      this.render();
    }
  }

  toggleLogScale(): void {
    this.state.logScale = !this.state.logScale;
    this.render();
  }

  private async refreshAfterWrite(id: string): Promise<void> {
    if (this.state.phase === "refining") {
      const view = await this.api.questions(id, this.state.k);
      this.state.questions = view.questions;
    }
    if (this.state.mode === "learn-global") {
      const params = await this.api.params(id);
      this.state.params = { reportability: params.reportability, bias: params.bias };
    }
  }

  async resync(): Promise<void> {
    const id = this.state.sessionId;
    if (!id) return;
    const resource = await this.api.getSession(id);
    this.state.phase = resource.phase;
    this.state.catalog = resource.catalog;
    this.state.differential = resource.differential;
    this.state.history = resource.evidence_log;
    this.state.params = resource.params ?? null;
    if (resource.phase === "refining") {
      const view = await this.api.questions(id, this.state.k);
      this.state.questions = view.questions;
    }
  }
}
