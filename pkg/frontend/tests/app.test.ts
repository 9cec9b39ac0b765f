import { afterEach, describe, expect, it, vi } from "vitest";

import { ModerationConsole } from "../src/app.js";
import { longitudinalPrompt } from "./fixtures.js";

function harness() {
  const root = document.createElement("div");
  const queue = document.createElement("div");
  root.append(queue);
  document.body.append(root);
  const app = new ModerationConsole("http://svc", "u_sarah", root, queue, null, {
    pollIntervalMs: 50,
  });
  return { app, root, queue };
}

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

afterEach(() => vi.unstubAllGlobals());

describe("ModerationConsole", () => {
  it("renders the queue from a poll and removes the card on accept", async () => {
    const prompt = longitudinalPrompt();
    let pending = [prompt];
    const fetchMock = vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
      const url = String(input);
      if (url.includes("/v1/prompts")) return jsonResponse({ prompts: pending });
      if (url.includes("/v1/decisions") && init?.method === "POST") {
        pending = [];
        return jsonResponse({ prompt: { ...prompt, status: "accepted" }, action: null });
      }
      throw new Error(`unexpected ${url}`);
    });
    vi.stubGlobal("fetch", fetchMock);

    const { app, queue } = harness();
    await app.refreshQueue();
    expect(queue.querySelectorAll(".prompt-card")).toHaveLength(1);

    await app.decide(prompt, "accept");
    const decisionCalls = fetchMock.mock.calls.filter(([u]) => String(u).includes("/v1/decisions"));
    expect(decisionCalls).toHaveLength(1);
    expect(queue.querySelector(".prompt-card")).toBeNull();
  });

  it("sends exactly one decision for rapid double clicks", async () => {
    const prompt = longitudinalPrompt();
    let resolveDecision: (r: Response) => void = () => undefined;
    const decisionGate = new Promise<Response>((resolve) => (resolveDecision = resolve));
    const fetchMock = vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
      const url = String(input);
      if (url.includes("/v1/prompts")) return jsonResponse({ prompts: [] });
      if (url.includes("/v1/decisions") && init?.method === "POST") return decisionGate;
      throw new Error(`unexpected ${url}`);
    });
    vi.stubGlobal("fetch", fetchMock);

    const { app } = harness();
    const first = app.decide(prompt, "accept");
    const second = app.decide(prompt, "accept");   // dropped: still in flight
    resolveDecision(jsonResponse({ prompt: { ...prompt, status: "accepted" }, action: null }));
    await Promise.all([first, second]);

    const decisionCalls = fetchMock.mock.calls.filter(([u]) => String(u).includes("/v1/decisions"));
    expect(decisionCalls).toHaveLength(1);
  });

  it("treats AlreadyDecided as settled, not an error", async () => {
    const prompt = longitudinalPrompt();
    const fetchMock = vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
      const url = String(input);
      if (url.includes("/v1/prompts")) return jsonResponse({ prompts: [] });
      if (url.includes("/v1/decisions") && init?.method === "POST") {
        return jsonResponse({ error: "AlreadyDecided", detail: "settled" }, 409);
      }
      throw new Error(`unexpected ${url}`);
    });
    vi.stubGlobal("fetch", fetchMock);

    const { app, root } = harness();
    await app.decide(prompt, "dismiss");
    expect(root.querySelector(".banner")).toBeNull();
  });

  it("shows a banner while the service is down and clears it on recovery", async () => {
    vi.useFakeTimers();
    let healthy = false;
    const fetchMock = vi.fn(async () => {
      if (!healthy) throw new TypeError("fetch failed");
      return jsonResponse({ prompts: [] });
    });
    vi.stubGlobal("fetch", fetchMock);

    const { app, root } = harness();
    app.start();
    await vi.advanceTimersByTimeAsync(0);
    expect(root.querySelector(".banner")?.textContent).toContain("Service unreachable");

    healthy = true;
    await vi.advanceTimersByTimeAsync(100);      // backoff delay after 1 failure
    expect(root.querySelector(".banner")).toBeNull();
    app.stop();
    vi.useRealTimers();
  });
});
