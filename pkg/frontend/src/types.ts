// Wire types mirroring the session service's JSON payloads.

export interface SymptomInfo {
  id: string;
  states: string[];
}

export interface DifferentialRow {
  disorder: string;
  p_present: number;
  probabilities: Record<string, number>;
}

export interface DifferentialView {
  session: string;
  phase: string;
  differential: DifferentialRow[];
}

export interface QuestionRow {
  symptom: string;
  score: number;
  rank: number;
}

export interface QuestionsView {
  session: string;
  questions: QuestionRow[];
}

export interface ParamAxisView {
  values: number[];
  probabilities: number[];
  expected: number;
}

export interface ParamsView {
  reportability: ParamAxisView;
  bias: ParamAxisView;
}

export interface LogEntry {
  kind: string;
  response?: Record<string, string>;
  symptom?: string;
  state?: string;
}

export interface SessionResource {
  id: string;
  kb: string;
  mode: string;
  phase: string;
  created_at: number;
  question: string;
  evidence_log: LogEntry[];
  catalog: SymptomInfo[];
  differential: DifferentialRow[];
  params?: ParamsView;
}

export interface ServiceErrorBody {
  code: string;
  message: string;
  field?: string;
}
