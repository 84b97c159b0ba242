// Wire types of the eval-advisor HTTP API. The UI renders these verbatim;
// it never re-derives suggestions or scores on the client side.

export type AttributeName =
  | 'Requirement'
  | 'ServiceFeature'
  | 'Metric'
  | 'Benchmark'
  | 'Environment'
  | 'Manipulation';

export const ATTRIBUTES: AttributeName[] = [
  'Requirement',
  'ServiceFeature',
  'Metric',
  'Benchmark',
  'Environment',
  'Manipulation',
];

export type RetrievalMode = 'precise' | 'heuristic' | 'fuzzy' | 'auto';

export interface WireItem {
  attribute: AttributeName;
  value: string;
  original?: string | null;
}

export interface Rational {
  num: number;
  den: number;
}

export interface Derivation {
  chain: string[];
  depth: number;
}

export interface Suggestion {
  item: WireItem;
  derivation: Derivation;
  confidence: Rational;
}

export interface Provenance {
  study: string;
  provider: string;
  service: string;
  year: number;
  origin?: string;
}

export interface WireRecord {
  id: string;
  provenance: Provenance;
  items: WireItem[];
  version: number;
  status: string;
  'created-at'?: string;
  supersedes?: string;
}

export interface RetrievalResult {
  record: WireRecord;
  'mode-used': Exclude<RetrievalMode, 'auto'>;
  'matched-items': WireItem[];
  'rules-applied': string[];
  'dropped-items': WireItem[];
  score: Rational;
}

export interface TraceStage {
  mode: Exclude<RetrievalMode, 'auto'>;
  results?: number;
  skipped?: string;
}

export interface RetrievalResponse {
  results: RetrievalResult[];
  'mode-trace': TraceStage[];
}

export interface EnquiryWire {
  items: WireItem[];
  mode: RetrievalMode;
  'requested-attributes': string[] | null;
}

export interface SuggestionReport {
  id: string;
  enquiry: EnquiryWire;
  suggestions: Partial<Record<AttributeName, Suggestion[]>>;
  'supporting-cases': RetrievalResult[];
  'retrieval-trace': TraceStage[];
  'generated-at': string;
  'kb-fingerprint': string;
}

export interface Rule {
  id: string;
  antecedent: WireItem[];
  consequent: WireItem;
  coverage: number;
  accuracy: Rational;
  origin: 'mined' | 'bridge' | 'curated';
}

export interface TermNode {
  attribute: AttributeName;
  label: string;
  synonyms: string[];
  description: string;
  children: TermNode[];
}

export interface FeedbackAck {
  status: string;
  report: string;
  'feedback-count': number;
}

export interface MineOutcome {
  rules: number;
  'kb-fingerprint': string;
}

export interface ApiError {
  code: string;
  message: string;
}
