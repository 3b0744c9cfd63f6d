// HTML renderers: pure functions from state to markup strings, so tests can
// assert on output without a DOM. Every number printed comes straight from
// a service payload value, formatted by `show` - the console never computes
// probabilities.
import type { ConsoleState } from "./state.js";
import type { DifferentialRow, ParamsView, QuestionRow, SymptomInfo } from "./types.js";

export function show(x: number): string {
  return x.toFixed(4);
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

// Bar lengths are presentation only; a log toggle keeps bars visible when
// the differential spans orders of magnitude.
function barWidth(p: number, logScale: boolean): number {
  if (!logScale) return Math.max(0.5, p * 100);
  if (p <= 0) return 0.5;
  const floor = 1e-6;
  const scaled = (Math.log10(Math.max(p, floor)) - Math.log10(floor)) / -Math.log10(floor);
  return Math.max(0.5, scaled * 100);
}

export function renderOpenProbePanel(catalog: SymptomInfo[], enabled: boolean): string {
  if (!catalog.length) {
    return `<p class="empty">No symptoms in this knowledge base.</p>`;
  }
  const rows = catalog
    .map((s) => {
      const options = s.states
        .map((st) => `<option value="${esc(st)}">${esc(st)}</option>`)
        .join("");
      return `
        <li>
          <label>
            <input type="checkbox" class="probe-check" data-symptom="${esc(s.id)}"
              ${enabled ? "" : "disabled"}>
            ${esc(s.id)}
          </label>
          <select class="probe-state" data-symptom="${esc(s.id)}" ${enabled ? "" : "disabled"}>
            ${options}
          </select>
        </li>`;
    })
    .join("");
  const note = enabled
    ? "Select everything the patient volunteered, then press OK."
    : "Initial complaint already submitted.";
  return `
    <p>${note}</p>
    <ul class="probe-list">${rows}</ul>
    <button id="probe-ok" ${enabled ? "" : "disabled"}>OK</button>`;
}

export function renderDifferential(rows: DifferentialRow[], logScale: boolean): string {
  if (!rows.length) {
    return `<p class="empty">No differential yet.</p>`;
  }
  const bars = rows
    .map((row) => {
      const width = barWidth(row.p_present, logScale).toFixed(1);
      return `
        <div class="bar-row" data-disorder="${esc(row.disorder)}">
          <span class="bar-label">${esc(row.disorder)}</span>
          <span class="bar-track"><span class="bar-fill" style="width:${width}%"></span></span>
          <span class="bar-value">${show(row.p_present)}</span>
        </div>`;
    })
    .join("");
  return `${bars}
    <label class="log-toggle">
      <input type="checkbox" id="log-scale" ${logScale ? "checked" : ""}> log scale
    </label>`;
}

export function renderQuestions(
  questions: QuestionRow[],
  catalog: SymptomInfo[],
  enabled: boolean,
): string {
  if (!questions.length) {
    return `<p class="empty">No open questions.</p>`;
  }
  const states = new Map(catalog.map((s) => [s.id, s.states]));
  const rows = questions
    .map((q) => {
      const buttons = (states.get(q.symptom) ?? [])
        .map(
          (st) =>
            `<button class="answer" data-symptom="${esc(q.symptom)}" data-state="${esc(st)}"
               ${enabled ? "" : "disabled"}>${esc(st)}</button>`,
        )
        .join(" ");
      return `
        <li>
          <span class="rank">#${q.rank}</span>
          <span class="symptom">${esc(q.symptom)}</span>
          <span class="score">${show(q.score)}</span>
          ${buttons}
        </li>`;
    })
    .join("");
  return `<ol class="question-list">${rows}</ol>`;
}

function renderAxis(label: string, axis: ParamsView["reportability"]): string {
  const peak = Math.max(...axis.probabilities, 1e-12);
  const bars = axis.values
    .map((v, i) => {
      const p = axis.probabilities[i];
      const height = Math.max(2, (p / peak) * 100).toFixed(1);
      return `
        <div class="grid-bar" data-value="${v}" title="${show(p)}">
          <div class="grid-fill" style="height:${height}%"></div>
          <div class="grid-tick">${v}</div>
        </div>`;
    })
    .join("");
  return `
    <div class="axis">
      <h3>${esc(label)} <small>E = ${show(axis.expected)}</small></h3>
      <div class="grid-bars">${bars}</div>
    </div>`;
}

export function renderParams(params: ParamsView | null): string {
  if (!params) {
    return "";
  }
  return renderAxis("reportability", params.reportability) + renderAxis("bias", params.bias);
}

export function renderHistory(state: ConsoleState): string {
  if (!state.history.length) {
    return `<p class="empty">No findings yet.</p>`;
  }
  const items = state.history
    .map((entry) => {
      if (entry.kind === "open-probe") {
        const found = Object.entries(entry.response ?? {})
          .map(([s, st]) => `${esc(s)}=${esc(st)}`)
          .join(", ");
        return `<li>open probe: ${found || "(nothing volunteered)"}</li>`;
      }
      return `<li>answered: ${esc(entry.symptom ?? "?")}=${esc(entry.state ?? "?")}</li>`;
    })
    .join("");
  return `<ul class="history">${items}</ul>`;
}

export function renderStatus(state: ConsoleState): string {
  const parts = [];
  if (state.sessionId) {
    parts.push(`session ${esc(state.sessionId.slice(0, 8))} [${esc(state.mode)}]`);
    parts.push(esc(state.phase));
  } else {
    parts.push("no session");
  }
  if (state.busy) parts.push("working...");
  if (state.error) parts.push(`<span class="error">${esc(state.error)}</span>`);
  return parts.join(" &middot; ");
}
