/** Thin fetch client for the service endpoints. */

import type { GlossaryEntryResponse, HealthResponse, ProcessResponse } from "./types";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (typeof body?.detail === "string") detail = body.detail;
    } catch {
      // keep the status text
    }
    throw new ApiError(response.status, `${response.status}: ${detail}`);
  }
  return response.json() as Promise<T>;
}

export function processText(
  text: string,
  expand: boolean,
  topK: number,
  signal?: AbortSignal,
): Promise<ProcessResponse> {
  return fetch("/process", {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify({ text, expand, top_k: topK }),
    signal,
  }).then((r) => asJson<ProcessResponse>(r));
}

export function fetchGlossaryEntry(acronym: string): Promise<GlossaryEntryResponse> {
  return fetch(`/glossary/${encodeURIComponent(acronym)}`).then((r) =>
    asJson<GlossaryEntryResponse>(r),
  );
}

export function fetchHealth(): Promise<HealthResponse> {
  return fetch("/health").then((r) => asJson<HealthResponse>(r));
}
