// Client-side state: the enquiry being built, report history, and
// staleness tracking against the server's current knowledge base.

import type {
  AttributeName,
  RetrievalMode,
  SuggestionReport,
  WireItem,
} from './types';

export interface EnquiryDraft {
  items: WireItem[];
  mode: RetrievalMode;
  requestedAttributes: AttributeName[];
}

export function emptyDraft(): EnquiryDraft {
  return { items: [], mode: 'auto', requestedAttributes: [] };
}

function sameItem(a: WireItem, b: WireItem): boolean {
  return a.attribute === b.attribute && a.value === b.value;
}

export function addItem(draft: EnquiryDraft, item: WireItem): EnquiryDraft {
  if (draft.items.some((existing) => sameItem(existing, item))) {
    return draft;
  }
  return { ...draft, items: [...draft.items, item] };
}

export function removeItem(draft: EnquiryDraft, item: WireItem): EnquiryDraft {
  return {
    ...draft,
    items: draft.items.filter((existing) => !sameItem(existing, item)),
  };
}

export function setMode(draft: EnquiryDraft, mode: RetrievalMode): EnquiryDraft {
  return { ...draft, mode };
}

export function toggleAttribute(
  draft: EnquiryDraft,
  attribute: AttributeName,
): EnquiryDraft {
  const present = draft.requestedAttributes.includes(attribute);
  return {
    ...draft,
    requestedAttributes: present
      ? draft.requestedAttributes.filter((a) => a !== attribute)
      : [...draft.requestedAttributes, attribute],
  };
}

export interface HistoryEntry {
  reportId: string;
  kbFingerprint: string;
  submittedFeedback: boolean;
  enquirySummary: string;
}

export function summarize(report: SuggestionReport): HistoryEntry {
  return {
    reportId: report.id,
    kbFingerprint: report['kb-fingerprint'],
    submittedFeedback: false,
    enquirySummary: report.enquiry.items
      .map((i) => `${i.attribute}: ${i.value}`)
      .join(', '),
  };
}

export function rememberReport(
  history: HistoryEntry[],
  report: SuggestionReport,
): HistoryEntry[] {
  const entry = summarize(report);
  const rest = history.filter((h) => h.reportId !== entry.reportId);
  return [entry, ...rest];
}

export function markFeedback(history: HistoryEntry[], reportId: string): HistoryEntry[] {
  return history.map((h) =>
    h.reportId === reportId ? { ...h, submittedFeedback: true } : h,
  );
}

/** A stored report is stale once the server's knowledge base moved on. */
export function isStale(reportFingerprint: string, currentFingerprint: string | null): boolean {
  return currentFingerprint !== null && reportFingerprint !== currentFingerprint;
}
