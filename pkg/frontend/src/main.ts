/** Browser bootstrap: reads service URL and target from the query string. */

import { ModerationConsole } from "./app.js";

function required(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id} container`);
  return node;
}

function boot(): void {
  const params = new URLSearchParams(window.location.search);
  const baseUrl = params.get("service") ?? "http://127.0.0.1:8400";
  const targetId = params.get("user") ?? "";
  if (!targetId) {
    required("queue").textContent = "Pass ?user=<monitored user id> in the URL.";
    return;
  }

  const app = new ModerationConsole(
    baseUrl,
    targetId,
    document.body,
    required("queue"),
    required("pair"),
  );
  app.start();

  const form = document.getElementById("pair-form") as HTMLFormElement | null;
  form?.addEventListener("submit", (submitEvent) => {
    submitEvent.preventDefault();
    const data = new FormData(form);
    const originator = String(data.get("originator") ?? "");
    const target = String(data.get("target") ?? targetId);
    if (originator) void app.showPair(originator, target);
  });
}

document.addEventListener("DOMContentLoaded", boot);
