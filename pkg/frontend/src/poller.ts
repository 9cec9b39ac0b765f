/** Fixed-interval poller with exponential backoff while the service is down. */

export interface PollerOptions {
  intervalMs?: number;
  maxBackoffMs?: number;
  onError?: (error: unknown, consecutiveFailures: number) => void;
  onRecover?: () => void;
}

export const DEFAULT_POLL_INTERVAL_MS = 2000;

export class Poller {
  private timer: ReturnType<typeof setTimeout> | null = null;
  private failures = 0;
  private running = false;
  readonly intervalMs: number;
  private readonly maxBackoffMs: number;

  constructor(
    private readonly tick: () => Promise<void>,
    private readonly options: PollerOptions = {},
  ) {
    this.intervalMs = options.intervalMs ?? DEFAULT_POLL_INTERVAL_MS;
    this.maxBackoffMs = options.maxBackoffMs ?? 30_000;
  }

  /** Delay before the next tick: the base interval while healthy,
   * interval * 2^failures (capped) while the service is unreachable. */
  nextDelay(): number {
    if (this.failures === 0) return this.intervalMs;
    return Math.min(this.intervalMs * 2 ** this.failures, this.maxBackoffMs);
  }

  start(): void {
    if (this.running) return;
    this.running = true;
    void this.runOnce();
  }

  stop(): void {
    this.running = false;
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
  }

  private async runOnce(): Promise<void> {
    if (!this.running) return;
    try {
      await this.tick();
      if (this.failures > 0) {
        this.failures = 0;
        this.options.onRecover?.();
      }
    } catch (error) {
      this.failures += 1;
      this.options.onError?.(error, this.failures);
    }
    if (!this.running) return;
    this.timer = setTimeout(() => void this.runOnce(), this.nextDelay());
  }
}
