/** Pure view-model builders: no DOM, no network, no re-ordering.
 *
 * Everything rendered by the viewer is derived here from the server
 * response alone. Candidate lists keep the exact server order; spans
 * keep the exact server offsets.
 */

import type { AnnotationPair, ProcessResponse, RankedPrediction } from "./types";

export interface HighlightInfo {
  key: string; // occurrence key, e.g. "GDP@38"
  acronym: string;
  start: number;
  end: number;
  pair: AnnotationPair | null;
  expansion: RankedPrediction | null;
}

export type Segment =
  | { kind: "plain"; text: string }
  | { kind: "highlight"; text: string; info: HighlightInfo };

export function occurrenceKey(acronym: string, start: number): string {
  return `${acronym}@${start}`;
}

/** Split the submitted text into plain runs and highlighted acronyms.
 *
 * Server spans may overlap when a hyphenated surface covers its parts
 * ("ABC-II" over "ABC" and "II"); the widest span wins the highlight.
 */
export function buildSegments(text: string, response: ProcessResponse): Segment[] {
  const spans = [...response.annotations.acronyms].sort(
    (a, b) => a.start - b.start || b.end - a.end,
  );
  const pairOf = new Map<string, AnnotationPair>();
  for (const pair of response.annotations.pairs) {
    pairOf.set(occurrenceKey(pair.acronym.text, pair.acronym.start), pair);
  }

  const segments: Segment[] = [];
  let pos = 0;
  for (const span of spans) {
    if (span.start < pos) continue; // covered by a wider span
    if (span.start > pos) {
      segments.push({ kind: "plain", text: text.slice(pos, span.start) });
    }
    const key = occurrenceKey(span.text, span.start);
    segments.push({
      kind: "highlight",
      text: text.slice(span.start, span.end),
      info: {
        key,
        acronym: span.text,
        start: span.start,
        end: span.end,
        pair: pairOf.get(key) ?? null,
        expansion: response.expansions[key] ?? null,
      },
    });
    pos = span.end;
  }
  if (pos < text.length) {
    segments.push({ kind: "plain", text: text.slice(pos) });
  }
  return segments;
}

export interface PopupModel {
  acronym: string;
  /** Resolved long form, or null when nothing is known. */
  longForm: string | null;
  /** "rule: CharacterMatch" for local pairs, the method otherwise. */
  provenance: string | null;
  /** Candidates exactly as the server sent them, never re-sorted. */
  candidates: { long_form: string; score: number }[];
  /** How many candidates to show before the "show all" expander. */
  previewCount: number;
}

export const POPUP_PREVIEW = 5;

export function buildPopupModel(
  info: HighlightInfo,
  previewLimit: number = POPUP_PREVIEW,
): PopupModel {
  if (info.pair) {
    return {
      acronym: info.acronym,
      longForm: info.pair.long_form.rendered,
      provenance: `rule: ${info.pair.rule}`,
      candidates: [],
      previewCount: 0,
    };
  }
  if (info.expansion) {
    const candidates = info.expansion.candidates;
    return {
      acronym: info.acronym,
      longForm: info.expansion.chosen,
      provenance: info.expansion.method,
      candidates,
      previewCount: Math.min(previewLimit, candidates.length),
    };
  }
  return {
    acronym: info.acronym,
    longForm: null,
    provenance: null,
    candidates: [],
    previewCount: 0,
  };
}
