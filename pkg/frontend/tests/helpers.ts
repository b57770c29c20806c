/** Loads the service golden fixtures shared with the backend suite. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { ProcessResponse } from "../src/types";

const HERE = dirname(fileURLToPath(import.meta.url));
const SERVICE_DATA = join(HERE, "..", "..", "tests", "data", "service");

export interface RecordedRequest {
  method: string;
  path: string;
  body: { text: string; expand: boolean; top_k: number } | null;
}

export function loadFixture(name: string): {
  request: RecordedRequest;
  response: ProcessResponse;
  responseBytes: Buffer;
} {
  const request = JSON.parse(
    readFileSync(join(SERVICE_DATA, `${name}.request.json`), "utf-8"),
  ) as RecordedRequest;
  const responseBytes = readFileSync(join(SERVICE_DATA, `${name}.response.bin`));
  const response = JSON.parse(responseBytes.toString("utf-8")) as ProcessResponse;
  return { request, response, responseBytes };
}

export const PROCESS_FIXTURES = ["process_noexpand", "process_expand"] as const;
