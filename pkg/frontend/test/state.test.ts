import assert from "node:assert/strict";
import { test } from "node:test";

import { ApiClient } from "../src/api.js";
import { ConsoleApp } from "../src/state.js";
import { FakeService } from "./fake_service.js";

function makeApp() {
  const fake = new FakeService();
  const renders: string[] = [];
  const app = new ConsoleApp(new ApiClient("http://fake", fake.fetch), (s) =>
    renders.push(s.phase),
  );
  return { fake, app, renders };
}

test("new session loads catalog and prior differential", async () => {
  const { app } = makeApp();
  await app.newSession("net-a", "fixed-params");
  assert.equal(app.state.sessionId, "fake-session");
  assert.equal(app.state.phase, "awaiting-open-probe");
  assert.deepEqual(
    app.state.catalog.map((s) => s.id),
    ["headache", "rash"],
  );
  assert.equal(app.state.differential[0].disorder, "migraine");
  assert.equal(app.state.params, null);
});

test("open probe updates differential from payload and fetches questions", async () => {
  const { fake, app } = makeApp();
  await app.newSession("net-a", "fixed-params");
  await app.submitOpenProbe({ rash: "present" });
  assert.equal(app.state.phase, "refining");
  const migraine = app.state.differential.find((d) => d.disorder === "migraine")!;
  assert.equal(migraine.p_present, 0.016878804648588822);
  assert.equal(app.state.questions.length, 1);
  const paths = fake.calls.map((c) => c.path);
  assert.ok(paths.some((p) => p.includes("/questions?k=3")));
});

test("second open probe is refused and surfaces the 409", async () => {
  const { app } = makeApp();
  await app.newSession("net-a", "fixed-params");
  await app.submitOpenProbe({ rash: "present" });
  // phase guard: the app never posts a second probe
  await app.submitOpenProbe({ headache: "present" });
  assert.equal(app.state.error, null);
  // force the post anyway to check 409 handling + resync
  app.state.phase = "awaiting-open-probe";
  await app.submitOpenProbe({ headache: "present" });
  assert.match(app.state.error ?? "", /wrong-phase/);
  assert.equal(app.state.phase, "refining"); // resynced from GET /sessions/{id}
});

test("answer posts and replaces differential with served values", async () => {
  const { app } = makeApp();
  await app.newSession("net-a", "fixed-params");
  await app.submitOpenProbe({ rash: "present" });
  await app.submitAnswer("headache", "absent");
  const migraine = app.state.differential.find((d) => d.disorder === "migraine")!;
  assert.equal(migraine.p_present, 0.011560693641618497);
  assert.deepEqual(app.state.history.at(-1), {
    kind: "closed-probe",
    symptom: "headache",
    state: "absent",
  });
});

test("duplicate answer surfaces a toast-worthy 409 and resyncs", async () => {
  const { app } = makeApp();
  await app.newSession("net-a", "fixed-params");
  await app.submitOpenProbe({ rash: "present" });
  await app.submitAnswer("headache", "absent");
  await app.submitAnswer("headache", "present");
  assert.match(app.state.error ?? "", /already-observed/);
});

test("k selector drives the question queue length", async () => {
  const { fake, app } = makeApp();
  await app.newSession("net-a", "fixed-params");
  await app.submitOpenProbe({});
  await app.setK(1);
  assert.ok(fake.calls.some((c) => c.path.includes("/questions?k=1")));
  await app.setK(25);
  assert.equal(app.state.k, 10); // clamped to the 1..10 selector range
});

test("learn-global session exposes params and refreshes them after writes", async () => {
  const { app } = makeApp();
  await app.newSession("net-a", "learn-global");
  assert.equal(app.state.params?.reportability.expected, 0.5);
  await app.submitOpenProbe({ rash: "present" });
  assert.equal(app.state.params?.reportability.expected, 0.575);
});

test("every state number is a payload value (no client-side math)", async () => {
  const { fake, app } = makeApp();
  await app.newSession("net-a", "learn-global");
  await app.submitOpenProbe({ rash: "present" });
  const served = new Set<number>();
  const collect = (value: unknown): void => {
    if (typeof value === "number") served.add(value);
    else if (Array.isArray(value)) value.forEach(collect);
    else if (value && typeof value === "object") Object.values(value).forEach(collect);
  };
  // re-run every recorded call against the fake to collect all served numbers
  // (snapshot first: replaying appends to fake.calls)
  for (const call of [...fake.calls]) {
    const resp = await fake.fetch(`http://fake${call.path}`, {
      method: call.method,
      body: call.body === undefined ? undefined : JSON.stringify(call.body),
    });
    collect(await resp.json());
  }
  const stateNumbers: number[] = [];
  const walkState = (value: unknown): void => {
    if (typeof value === "number") stateNumbers.push(value);
    else if (Array.isArray(value)) value.forEach(walkState);
    else if (value && typeof value === "object") Object.values(value).forEach(walkState);
  };
  walkState(app.state.differential);
  walkState(app.state.questions);
  walkState(app.state.params);
  for (const n of stateNumbers) {
    assert.ok(served.has(n), `state number ${n} not traceable to a service payload`);
  }
});
