/** Shapes of the service JSON, mirrored field for field. */

export interface AcronymSpan {
  text: string;
  start: number;
  end: number;
  token_idx: number;
}

export interface LongFormSpan {
  text: string;
  rendered: string;
  start: number;
  end: number;
  start_idx: number;
  end_idx: number;
}

export interface AnnotationPair {
  acronym: AcronymSpan;
  long_form: LongFormSpan;
  rule: string;
}

export interface GlossaryLine {
  acronym: string;
  long_form: string;
  rule: string;
}

export interface Annotations {
  acronyms: AcronymSpan[];
  pairs: AnnotationPair[];
  glossary: GlossaryLine[];
}

export interface Candidate {
  long_form: string;
  score: number;
}

export interface RankedPrediction {
  candidates: Candidate[];
  chosen: string;
  method: string;
}

export interface GlossaryRow {
  acronym: string;
  long_form: string | null;
  source: string | null;
}

export interface ProcessResponse {
  annotations: Annotations;
  expansions: Record<string, RankedPrediction>;
  glossary: GlossaryRow[];
}

export interface GlossaryEntryResponse {
  acronym: string;
  candidates: { long_form: string; frequency: number; sources: string[] }[];
}

export interface HealthResponse {
  status: string;
  models_loaded: number;
  glossary_entries: number;
}
