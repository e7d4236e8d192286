/** Thin typed client over fetch. Every engine rejection becomes an ApiError
 * carrying the server's error code verbatim; callers map codes to copy via
 * errors.ts. No other network calls exist in this app. */

import type { AssignableTier, Envelope, EventRecord, OptionStatus } from "./types.js";

let base = "";

/** Point the client at a server origin ("" = same origin). */
export function setApiBase(url: string): void {
  base = url.replace(/\/+$/, "");
}

export function apiBase(): string {
  return base;
}

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly body: Record<string, unknown>;

  constructor(status: number, body: Record<string, unknown>) {
    super(typeof body.message === "string" ? body.message : `request failed (${status})`);
    this.code = typeof body.code === "string" ? body.code : "unknown";
    this.status = status;
    this.body = body;
  }
}

async function call<T>(method: string, path: string, body?: unknown): Promise<T> {
  const response = await fetch(`${base}/api/v1${path}`, {
    method,
    headers: body === undefined ? undefined : { "content-type": "application/json" },
    body: body === undefined ? undefined : JSON.stringify(body),
  });
  if (!response.ok) {
    let parsed: Record<string, unknown>;
    try {
      parsed = (await response.json()) as Record<string, unknown>;
    } catch {
      parsed = { code: "unknown", message: response.statusText };
    }
    // FastAPI's own validation errors have {detail: [...]} instead of a code.
    if (typeof parsed.code !== "string" && "detail" in parsed) {
      parsed = { code: "invalid-payload", message: "the request body was malformed" };
    }
    throw new ApiError(response.status, parsed);
  }
  return (await response.json()) as T;
}

async function text(path: string): Promise<string> {
  const response = await fetch(`${base}/api/v1${path}`);
  if (!response.ok) {
    throw new ApiError(response.status, (await response.json()) as Record<string, unknown>);
  }
  return await response.text();
}

export const api = {
  createSession(config: Record<string, unknown> = {}): Promise<Envelope> {
    return call("POST", "/sessions", { config });
  },
  getState(id: string): Promise<Envelope> {
    return call("GET", `/sessions/${id}`);
  },
  submitFraming(id: string, decisionText: string, idealText: string): Promise<Envelope> {
    return call("POST", `/sessions/${id}/framing`, {
      decision_text: decisionText,
      ideal_qualities_text: idealText,
    });
  },
  setOptionStatus(id: string, optionId: string, status: OptionStatus): Promise<Envelope> {
    return call("POST", `/sessions/${id}/options/${optionId}/status`, { status });
  },
  addOption(id: string, textValue: string): Promise<Envelope> {
    return call("POST", `/sessions/${id}/options`, { text: textValue });
  },
  confirmNarrowing(id: string): Promise<Envelope> {
    return call("POST", `/sessions/${id}/narrowing/confirm`);
  },
  addCriterion(id: string, label: string): Promise<Envelope> {
    return call("POST", `/sessions/${id}/criteria`, { label });
  },
  setTier(id: string, criterionId: string, tier: AssignableTier): Promise<Envelope> {
    return call("POST", `/sessions/${id}/criteria/${criterionId}/tier`, { tier });
  },
  removeCriterion(id: string, criterionId: string): Promise<Envelope> {
    return call("POST", `/sessions/${id}/criteria/${criterionId}/remove`);
  },
  confirmPrioritization(id: string): Promise<Envelope> {
    return call("POST", `/sessions/${id}/prioritization/confirm`);
  },
  selectDefinitions(
    id: string,
    criterionId: string,
    selectedIds: string[],
    customTexts: string[] = [],
  ): Promise<Envelope> {
    return call("POST", `/sessions/${id}/criteria/${criterionId}/definitions`, {
      selected_ids: selectedIds,
      custom_texts: customTexts,
    });
  },
  confirmRedefinition(id: string, finish: boolean): Promise<Envelope> {
    return call("POST", `/sessions/${id}/redefinition/confirm`, { finish });
  },
  retryGeneration(id: string): Promise<Envelope> {
    return call("POST", `/sessions/${id}/generation`);
  },
  getEvents(id: string): Promise<{ session_id: string; events: EventRecord[] }> {
    return call("GET", `/sessions/${id}/events`);
  },
  branch(id: string, atSeq: number): Promise<Envelope> {
    return call("POST", `/sessions/${id}/branch`, { at_seq: atSeq });
  },
  exportDocument(id: string, format: "json" | "markdown"): Promise<string> {
    return text(`/sessions/${id}/export?format=${format}`);
  },
  errorCodes(): Promise<{ codes: string[] }> {
    return call("GET", "/meta/error-codes");
  },
};
