/** Console wiring: prompt queue polling, decision clicks, pair inspector. */

import { ApiClient, ServiceError } from "./api.js";
import { Poller, type PollerOptions } from "./poller.js";
import type { Prompt } from "./types.js";
import { renderBanner, renderPairHistory, renderPromptQueue } from "./views.js";

export interface ConsoleOptions {
  pollIntervalMs?: number;
}

export class ModerationConsole {
  readonly api: ApiClient;
  readonly poller: Poller;
  private readonly inFlight = new Set<string>();

  constructor(
    baseUrl: string,
    readonly targetId: string,
    private readonly root: HTMLElement,
    private readonly queueContainer: HTMLElement,
    private readonly pairContainer: HTMLElement | null = null,
    options: ConsoleOptions = {},
  ) {
    this.api = new ApiClient(baseUrl);
    const pollerOptions: PollerOptions = {
      onError: (_error, failures) =>
        renderBanner(this.root, `Service unreachable, retrying (attempt ${failures})…`),
      onRecover: () => renderBanner(this.root, null),
    };
    if (options.pollIntervalMs !== undefined) {
      pollerOptions.intervalMs = options.pollIntervalMs;
    }
    this.poller = new Poller(() => this.refreshQueue(), pollerOptions);
  }

  start(): void {
    this.poller.start();
  }

  stop(): void {
    this.poller.stop();
  }

  async refreshQueue(): Promise<void> {
    const list = await this.api.pendingPrompts(this.targetId);
    renderPromptQueue(this.queueContainer, list.prompts, {
      onAccept: (prompt) => void this.decide(prompt, "accept"),
      onDismiss: (prompt) => void this.decide(prompt, "dismiss"),
    });
  }

  /** Sends exactly one decision per prompt: repeat clicks while a request
   * is in flight are dropped, and AlreadyDecided replies are treated as
   * settled rather than errors. */
  async decide(prompt: Prompt, decision: "accept" | "dismiss"): Promise<void> {
    if (this.inFlight.has(prompt.prompt_id)) return;
    this.inFlight.add(prompt.prompt_id);
    try {
      await this.api.decide(prompt.prompt_id, decision);
    } catch (error) {
      if (!(error instanceof ServiceError && error.code === "AlreadyDecided")) {
        renderBanner(this.root, `Decision failed: ${String(error)}`);
        return;
      }
    } finally {
      this.inFlight.delete(prompt.prompt_id);
    }
    // Drop the card immediately; the next poll re-syncs with the service.
    this.queueContainer
      .querySelector(`[data-prompt-id="${prompt.prompt_id}"]`)
      ?.remove();
    if (this.queueContainer.childElementCount === 0) {
      await this.refreshQueue().catch(() => undefined);
    }
  }

  async showPair(originatorId: string, targetId: string): Promise<void> {
    if (this.pairContainer === null) return;
    const pair = await this.api.pair(originatorId, targetId);
    renderPairHistory(this.pairContainer, pair);
  }
}
