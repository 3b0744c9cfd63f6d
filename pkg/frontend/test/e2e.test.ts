// End-to-end: a scripted interview against the real Python service.
// Open probe "rash" on the two-disorder KB, then answer headache=absent;
// the rendered differential must display the served numbers (0.0169 then
// 0.0116 for migraine) with no client-side divergence.
import assert from "node:assert/strict";
import { spawn } from "node:child_process";
import { after, before, test } from "node:test";

import { ApiClient } from "../src/api.js";
import { renderDifferential } from "../src/render.js";
import { ConsoleApp } from "../src/state.js";

const PORT = 8765 + (process.pid % 500);
const BASE = `http://127.0.0.1:${PORT}`;

let service: ReturnType<typeof spawn> | null = null;

async function waitForHealthy(timeoutMs = 30_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(`${BASE}/healthz`);
      if (resp.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 200));
  }
  throw new Error("service did not become healthy");
}

before(async () => {
  service = spawn(
    "python3",
    ["-m", "dxprobe.cli", "serve", "net-a", "--port", String(PORT), "--host", "127.0.0.1"],
    { stdio: ["ignore", "inherit", "inherit"] },
  );
  await waitForHealthy();
});

after(() => {
  service?.kill("SIGINT");
});

test("scripted interview shows served numbers in the rendered DOM strings", async () => {
  const renders: string[] = [];
  const app = new ConsoleApp(new ApiClient(BASE), (state) => {
    renders.push(renderDifferential(state.differential, state.logScale));
  });

  await app.newSession("net-a", "fixed-params");
  assert.equal(app.state.phase, "awaiting-open-probe");
  assert.deepEqual(
    app.state.catalog.map((s) => s.id),
    ["headache", "rash"],
  );

  await app.submitOpenProbe({ rash: "present" });
  assert.equal(app.state.error, null);
  const afterProbe = renders[renders.length - 1];
  assert.ok(afterProbe.includes("0.0169"), `expected 0.0169 in:\n${afterProbe}`);

  // Rendered text must be exactly the served payload value, 4 decimals.
  const servedMigraine = app.state.differential.find((d) => d.disorder === "migraine")!;
  assert.ok(Math.abs(servedMigraine.p_present - 0.016878804648588822) < 1e-12);
  assert.ok(afterProbe.includes(servedMigraine.p_present.toFixed(4)));

  await app.submitAnswer("headache", "absent");
  assert.equal(app.state.error, null);
  const afterAnswer = renders[renders.length - 1];
  assert.ok(afterAnswer.includes("0.0116"), `expected 0.0116 in:\n${afterAnswer}`);
  const answered = app.state.differential.find((d) => d.disorder === "migraine")!;
  assert.ok(Math.abs(answered.p_present - 0.011560693641618497) < 1e-12);
  assert.ok(afterAnswer.includes(answered.p_present.toFixed(4)));

  // The ranked-question queue is empty once every symptom is observed.
  assert.equal(app.state.questions.length, 0);
});

test("phase violations surface as service 409s, not client guesses", async () => {
  const app = new ConsoleApp(new ApiClient(BASE));
  await app.newSession("net-a", "fixed-params");
  await app.submitOpenProbe({});
  app.state.phase = "awaiting-open-probe"; // bypass the local guard
  await app.submitOpenProbe({});
  assert.match(app.state.error ?? "", /wrong-phase/);
  assert.equal(app.state.phase, "refining");
});
