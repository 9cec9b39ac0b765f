/**
 * Console against the real service: spawns `modkit serve` on a loopback
 * port, ingests the persistent-abuser scenario, and drives the DOM.
 *
 * Needs the Python package installed (`pip install -e ..`); skipped with a
 * notice when it is not.
 */

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync, existsSync } from "node:fs";
import { tmpdir } from "node:os";
import { createServer } from "node:net";
import { join, resolve } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ModerationConsole } from "../src/app.js";

const REPO_ROOT = resolve(__dirname, "..", "..");
const SCENARIO = join(REPO_ROOT, "src", "modkit", "data", "scenarios", "persistent_abuser");
const POLL_INTERVAL_MS = 500;

const pythonReady =
  spawnSync("python3", ["-c", "import modkit"], { cwd: REPO_ROOT }).status === 0;

function freePort(): Promise<number> {
  return new Promise((resolvePort, reject) => {
    const probe = createServer();
    probe.once("error", reject);
    probe.listen(0, "127.0.0.1", () => {
      const address = probe.address();
      if (address === null || typeof address === "string") {
        reject(new Error("no port"));
        return;
      }
      probe.close(() => resolvePort(address.port));
    });
  });
}

async function waitFor(
  predicate: () => boolean | Promise<boolean>,
  deadlineMs: number,
  stepMs = 25,
): Promise<number> {
  const start = Date.now();
  for (;;) {
    if (await predicate()) return Date.now() - start;
    if (Date.now() - start > deadlineMs) throw new Error("timed out");
    await new Promise((r) => setTimeout(r, stepMs));
  }
}

describe.skipIf(!pythonReady)("console against a live service", () => {
  let service: ChildProcess;
  let baseUrl: string;
  let stateDir: string;
  let exited: Promise<number | null>;

  beforeAll(async () => {
    const port = await freePort();
    baseUrl = `http://127.0.0.1:${port}`;
    stateDir = mkdtempSync(join(tmpdir(), "modkit-console-"));
    const configPath = join(stateDir, "config.json");
    writeFileSync(
      configPath,
      JSON.stringify({
        monitored_targets: ["u_sarah"],
        listen_address: `127.0.0.1:${port}`,
        store_dir: stateDir,
      }),
    );
    service = spawn(
      "python3",
      ["-m", "modkit.cli", "serve", "--config", configPath,
        "--profiles", join(SCENARIO, "profiles.jsonl")],
      { cwd: REPO_ROOT, stdio: ["ignore", "pipe", "pipe"] },
    );
    exited = new Promise((resolveExit) => service.once("exit", resolveExit));
    await waitFor(async () => {
      try {
        const response = await fetch(`${baseUrl}/v1/health`);
        return response.ok;
      } catch {
        return false;
      }
    }, 20_000, 100);
  });

  afterAll(async () => {
    service.kill("SIGTERM");
    await exited;
  });

  it("shows the prompt within two poll intervals, accepts it, logs one action", async () => {
    const root = document.createElement("div");
    const queue = document.createElement("div");
    const pairBox = document.createElement("div");
    root.append(queue, pairBox);
    document.body.append(root);

    const app = new ModerationConsole(baseUrl, "u_sarah", root, queue, pairBox, {
      pollIntervalMs: POLL_INTERVAL_MS,
    });
    app.start();
    await waitFor(() => queue.querySelector(".empty-state") !== null, 5_000);

    // Platform feed arrives while the console is watching.
    const ingest = await fetch(`${baseUrl}/v1/ingest`, {
      method: "POST",
      body: readFileSync(join(SCENARIO, "events.jsonl")),
    });
    expect(ingest.ok).toBe(true);

    const appearedMs = await waitFor(
      () => queue.querySelector(".prompt-card") !== null,
      2 * POLL_INTERVAL_MS + 200,
    );
    expect(appearedMs).toBeLessThanOrEqual(2 * POLL_INTERVAL_MS + 200);

    const message = queue.querySelector(".prompt-message")?.textContent;
    expect(message).toBe(
      "This person has tweeted you 3 times before- would you like to block them?",
    );

    // Accept; the card leaves the queue and the action log gains one line.
    (queue.querySelector("button.accept") as HTMLButtonElement).click();
    await waitFor(() => queue.querySelector(".prompt-card") === null, 5_000);

    const actionsPath = join(stateDir, "actions.jsonl");
    await waitFor(() => existsSync(actionsPath), 5_000);
    const lines = readFileSync(actionsPath, "utf-8").trim().split("\n");
    expect(lines).toHaveLength(1);
    const action = JSON.parse(lines[0]!) as { kind: string; result: string };
    expect(action.kind).toBe("block_account");
    expect(action.result).toBe("simulated");

    // Rendered directionality equals the API value exactly.
    const apiPair = (await (await fetch(`${baseUrl}/v1/pairs/u_dennis/u_sarah`)).json()) as {
      directionality_pct: number;
    };
    await app.showPair("u_dennis", "u_sarah");
    const rendered = pairBox.querySelector('[data-stat="directionality"]')?.textContent;
    expect(rendered).toBe(`${apiPair.directionality_pct}%`);

    app.stop();
  });
});
