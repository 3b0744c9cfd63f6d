// Bootstraps the console: wires DOM events to the state machine and repaints
// panels from each service response.
import { ApiClient } from "./api.js";
import {
  renderDifferential,
  renderHistory,
  renderOpenProbePanel,
  renderParams,
  renderQuestions,
  renderStatus,
} from "./render.js";
import { ConsoleApp, ConsoleState } from "./state.js";

const SERVICE_URL =
  new URLSearchParams(window.location.search).get("service") ?? "http://127.0.0.1:8080";

const el = (id: string): HTMLElement => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
};

function paint(state: ConsoleState): void {
  el("status").innerHTML = renderStatus(state);
  const probeEnabled = state.phase === "awaiting-open-probe" && !state.busy;
  el("open-probe").innerHTML = renderOpenProbePanel(state.catalog, probeEnabled);
  el("differential").innerHTML = renderDifferential(state.differential, state.logScale);
  el("questions").innerHTML = renderQuestions(
    state.questions,
    state.catalog,
    state.phase === "refining" && !state.busy,
  );
  el("params-body").innerHTML = renderParams(state.params);
  el("params").style.display = state.params ? "block" : "none";
  el("history").innerHTML = renderHistory(state);
}

function collectProbeSelection(): Record<string, string> {
  const reported: Record<string, string> = {};
  document.querySelectorAll<HTMLInputElement>(".probe-check:checked").forEach((box) => {
    const symptom = box.dataset.symptom!;
    const select = document.querySelector<HTMLSelectElement>(
      `.probe-state[data-symptom="${symptom}"]`,
    );
    reported[symptom] = select?.value ?? "present";
  });
  return reported;
}

function start(): void {
  const api = new ApiClient(SERVICE_URL);
  const app = new ConsoleApp(api, paint);

  el("new-session").addEventListener("click", () => {
    const kb = (el("kb-name") as HTMLInputElement).value.trim();
    const mode = (el("mode") as HTMLSelectElement).value;
    if (kb) void app.newSession(kb, mode);
  });

  el("k-select").addEventListener("change", () => {
    void app.setK(Number((el("k-select") as HTMLSelectElement).value));
  });

  // Panels repaint per state change, so clicks are delegated from stable roots.
  el("open-probe").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.id === "probe-ok") {
      void app.submitOpenProbe(collectProbeSelection());
    }
  });

  el("differential").addEventListener("change", (event) => {
    if ((event.target as HTMLElement).id === "log-scale") {
      app.toggleLogScale();
    }
  });

  el("questions").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.classList.contains("answer")) {
      void app.submitAnswer(target.dataset.symptom!, target.dataset.state!);
    }
  });

  paint(app.state);
}

document.addEventListener("DOMContentLoaded", start);
