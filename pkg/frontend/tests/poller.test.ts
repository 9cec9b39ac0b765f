import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { Poller } from "../src/poller.js";

describe("Poller", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("ticks immediately and then at the configured interval", async () => {
    const tick = vi.fn().mockResolvedValue(undefined);
    const poller = new Poller(tick, { intervalMs: 2000 });
    poller.start();
    await vi.advanceTimersByTimeAsync(0);
    expect(tick).toHaveBeenCalledTimes(1);
    await vi.advanceTimersByTimeAsync(2000);
    expect(tick).toHaveBeenCalledTimes(2);
    await vi.advanceTimersByTimeAsync(4000);
    expect(tick).toHaveBeenCalledTimes(4);
    poller.stop();
  });

  it("backs off exponentially while failing and recovers after success", async () => {
    let healthy = false;
    const errors: number[] = [];
    let recovered = 0;
    const poller = new Poller(
      async () => {
        if (!healthy) throw new Error("down");
      },
      {
        intervalMs: 1000,
        maxBackoffMs: 8000,
        onError: (_e, failures) => errors.push(failures),
        onRecover: () => (recovered += 1),
      },
    );
    poller.start();
    await vi.advanceTimersByTimeAsync(0);      // failure 1 -> delay 2s
    expect(poller.nextDelay()).toBe(2000);
    await vi.advanceTimersByTimeAsync(2000);   // failure 2 -> delay 4s
    expect(poller.nextDelay()).toBe(4000);
    await vi.advanceTimersByTimeAsync(4000);   // failure 3 -> delay 8s (cap)
    expect(poller.nextDelay()).toBe(8000);
    await vi.advanceTimersByTimeAsync(8000);   // failure 4 -> still capped
    expect(poller.nextDelay()).toBe(8000);
    expect(errors).toEqual([1, 2, 3, 4]);

    healthy = true;
    await vi.advanceTimersByTimeAsync(8000);   // success -> recovery
    expect(recovered).toBe(1);
    expect(poller.nextDelay()).toBe(1000);
    poller.stop();
  });

  it("stops cleanly and never double-starts", async () => {
    const tick = vi.fn().mockResolvedValue(undefined);
    const poller = new Poller(tick, { intervalMs: 500 });
    poller.start();
    poller.start();
    await vi.advanceTimersByTimeAsync(0);
    expect(tick).toHaveBeenCalledTimes(1);
    poller.stop();
    await vi.advanceTimersByTimeAsync(5000);
    expect(tick).toHaveBeenCalledTimes(1);
  });
});
