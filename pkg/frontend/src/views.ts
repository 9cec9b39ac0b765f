/** DOM rendering. Every displayed number comes straight from a service
 * response; nothing here recomputes moderation values. */

import type { PairView, Prompt } from "./types.js";

const KIND_LABELS: Record<Prompt["kind"], string> = {
  longitudinal: "Repeat abuse",
  informational: "Anonymous account",
  volumetric: "Unusual volume",
};

const ACTION_LABELS: Record<Prompt["proposed_action"], string> = {
  block_account: "Block account",
  delete_incoming: "Delete incoming tweets",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/** Exact rendering for percentages: the service's number, verbatim. */
export function formatPct(value: number | null): string {
  return value === null ? "–" : `${value}%`;
}

export function indicatorSummaryLine(prompt: Prompt): string {
  const ind = prompt.indicators;
  switch (prompt.kind) {
    case "longitudinal":
      return `${ind.longitudinal.prior_abusive_count} prior abusive messages on this pair`;
    case "informational":
      return `target holds ${formatPct(ind.informational.target_share_pct)} of pair information`;
    case "volumetric":
      return `${ind.volumetric.inbound_count} inbound this window vs baseline ${ind.volumetric.baseline}`;
  }
}

export interface PromptCardHandlers {
  onAccept: (prompt: Prompt) => void;
  onDismiss: (prompt: Prompt) => void;
}

export function renderPromptCard(prompt: Prompt, handlers: PromptCardHandlers): HTMLElement {
  const card = el("article", "prompt-card");
  card.dataset.promptId = prompt.prompt_id;
  card.dataset.kind = prompt.kind;

  const head = el("header", "prompt-head");
  head.append(
    el("span", "prompt-kind", KIND_LABELS[prompt.kind]),
    el("span", "prompt-pair", `@${prompt.originator_handle} → @${prompt.target_handle}`),
    el("time", "prompt-time", prompt.created_at),
  );

  // The service renders the template; the console shows it untouched.
  const message = el("p", "prompt-message", prompt.message);
  const summary = el("p", "prompt-summary", indicatorSummaryLine(prompt));

  const controls = el("div", "prompt-controls");
  const accept = el("button", "accept", ACTION_LABELS[prompt.proposed_action]);
  accept.addEventListener("click", () => handlers.onAccept(prompt));
  const dismiss = el("button", "dismiss", "Dismiss");
  dismiss.addEventListener("click", () => handlers.onDismiss(prompt));
  controls.append(accept, dismiss);

  card.append(head, message, summary, controls);
  return card;
}

export function renderPromptQueue(
  container: HTMLElement,
  prompts: Prompt[],
  handlers: PromptCardHandlers,
): void {
  container.replaceChildren();
  if (prompts.length === 0) {
    container.append(el("p", "empty-state", "No pending prompts."));
    return;
  }
  for (const prompt of prompts) {
    container.append(renderPromptCard(prompt, handlers));
  }
}

export function renderPairHistory(container: HTMLElement, pair: PairView): void {
  container.replaceChildren();
  const head = el("header", "pair-head",
    `@${pair.originator_handle} → @${pair.target_handle}`);

  const stats = el("dl", "pair-stats");
  const rows: Array<[string, string, string]> = [
    ["outbound", "Outbound", String(pair.outbound_count)],
    ["inbound", "Inbound", String(pair.inbound_count)],
    ["directionality", "Directionality", formatPct(pair.directionality_pct)],
    ["abusive", "Abusive (outbound)", String(pair.abusive_count)],
  ];
  for (const [key, label, value] of rows) {
    stats.append(el("dt", undefined, label));
    const dd = el("dd", undefined, value);
    dd.dataset.stat = key;
    stats.append(dd);
  }

  const timeline = el("ol", "pair-timeline");
  if (pair.events.length === 0) {
    timeline.append(el("li", "empty-state", "No interactions in the lookback window."));
  }
  for (const event of pair.events) {
    const row = el("li", `direction-${event.direction}`);
    row.append(
      el("time", undefined, event.created_at),
      el("span", "arrow", event.direction === "outbound" ? "→" : "←"),
      el("span", "toxicity", event.toxicity.toFixed(2)),
    );
    timeline.append(row);
  }

  container.append(head, stats, timeline);
}

export function renderBanner(container: HTMLElement, text: string | null): void {
  const existing = container.querySelector(".banner");
  if (text === null) {
    existing?.remove();
    return;
  }
  if (existing) {
    existing.textContent = text;
    return;
  }
  const banner = el("div", "banner", text);
  container.prepend(banner);
}
