/** Thin typed client over the moderation service HTTP API. */

import type { DecisionResponse, PairView, PromptList } from "./types.js";

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    detail: string,
  ) {
    super(`${code}: ${detail}`);
  }
}

async function parseError(response: Response): Promise<ServiceError> {
  let code = "HttpError";
  let detail = `${response.status}`;
  try {
    const body = (await response.json()) as { error?: string; detail?: string };
    code = body.error ?? code;
    detail = body.detail ?? detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ServiceError(response.status, code, detail);
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(this.baseUrl + path);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  async health(): Promise<{ status: string; schema_version: number }> {
    return this.get("/v1/health");
  }

  async pendingPrompts(userId: string): Promise<PromptList> {
    return this.get(`/v1/prompts?user=${encodeURIComponent(userId)}&status=pending`);
  }

  async decide(promptId: string, decision: "accept" | "dismiss"): Promise<DecisionResponse> {
    const response = await fetch(this.baseUrl + "/v1/decisions", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ prompt_id: promptId, decision }),
    });
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as DecisionResponse;
  }

  async pair(originatorId: string, targetId: string): Promise<PairView> {
    return this.get(
      `/v1/pairs/${encodeURIComponent(originatorId)}/${encodeURIComponent(targetId)}`,
    );
  }
}
