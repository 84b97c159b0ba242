// Browser wiring: binds the screens together against a running server.
// All rendering goes through the pure functions in render.ts.

import { ApiFailure, Client } from './api';
import {
  EnquiryDraft,
  HistoryEntry,
  addItem,
  emptyDraft,
  isStale,
  markFeedback,
  rememberReport,
  removeItem,
  setMode,
} from './state';
import {
  renderDraftItems,
  renderFeedbackToast,
  renderHistory,
  renderModeTrace,
  renderProvenance,
  renderResults,
  renderStaleBanner,
  renderSuggestions,
  renderVocabularyTree,
} from './render';
import type { RetrievalMode, Rule, SuggestionReport, WireItem } from './types';

const API_BASE =
  new URLSearchParams(window.location.search).get('api') ?? 'http://127.0.0.1:8571';

const client = new Client(API_BASE);

let draft: EnquiryDraft = emptyDraft();
let history: HistoryEntry[] = [];
let currentReport: SuggestionReport | null = null;
let currentFingerprint: string | null = null;
let rulesById = new Map<string, Rule>();

function element(id: string): HTMLElement {
  const found = document.getElementById(id);
  if (!found) {
    throw new Error(`missing element #${id}`);
  }
  return found;
}

function showError(err: unknown): void {
  const box = element('errors');
  const message =
    err instanceof ApiFailure ? `${err.error.code}: ${err.error.message}` : String(err);
  box.innerHTML = `<div class="banner banner-error">${message}</div>`;
  window.setTimeout(() => (box.innerHTML = ''), 6000);
}

function refreshDraft(): void {
  element('draft').innerHTML = renderDraftItems(draft.items);
}

function refreshHistory(): void {
  element('history').innerHTML = renderHistory(history);
}

function refreshStaleness(): void {
  const banner = element('stale-banner');
  if (
    currentReport &&
    isStale(currentReport['kb-fingerprint'], currentFingerprint)
  ) {
    banner.innerHTML = renderStaleBanner(
      currentReport['kb-fingerprint'],
      currentFingerprint as string,
    );
  } else {
    banner.innerHTML = '';
  }
}

async function loadVocabulary(): Promise<void> {
  const roots = await client.getVocabulary();
  element('vocabulary').innerHTML = renderVocabularyTree(roots);
}

async function loadRules(): Promise<void> {
  const rules = await client.getRules();
  rulesById = new Map(rules.map((r) => [r.id, r]));
}

async function submitEnquiry(): Promise<void> {
  try {
    const report = await client.postEnquiry(draft.items);
    currentReport = report;
    currentFingerprint = report['kb-fingerprint'];
    history = rememberReport(history, report);
    element('suggestions').innerHTML = renderSuggestions(report);
    element('supporting').innerHTML = renderResults(
      report['supporting-cases'],
      report['retrieval-trace'],
    );
    refreshHistory();
    refreshStaleness();
  } catch (err) {
    showError(err);
  }
}

async function runRetrieval(mode: RetrievalMode): Promise<void> {
  try {
    const response = await client.postRetrieval(draft.items, mode);
    element('retrievals').innerHTML = renderResults(
      response.results,
      response['mode-trace'],
    );
  } catch (err) {
    showError(err);
  }
}

async function submitFeedback(verdict: 'helpful' | 'not-helpful'): Promise<void> {
  if (!currentReport) {
    return;
  }
  const note = (element('feedback-note') as HTMLTextAreaElement).value;
  const reportId = currentReport.id;
  // optimistic: mark locally first, reconcile on failure
  history = markFeedback(history, reportId);
  refreshHistory();
  try {
    const ack = await client.postFeedback(reportId, verdict, note);
    element('toast').innerHTML = renderFeedbackToast(ack['feedback-count']);
    window.setTimeout(() => (element('toast').innerHTML = ''), 4000);
  } catch (err) {
    history = history.map((h) =>
      h.reportId === reportId ? { ...h, submittedFeedback: false } : h,
    );
    refreshHistory();
    showError(err);
  }
}

function handleClicks(event: Event): void {
  const target = event.target as HTMLElement;
  if (target.matches('.term-pick')) {
    const item: WireItem = {
      attribute: target.dataset.attribute as WireItem['attribute'],
      value: target.dataset.value as string,
    };
    draft = addItem(draft, item);
    refreshDraft();
  } else if (target.matches('.chip-remove')) {
    draft = removeItem(draft, {
      attribute: target.dataset.attribute as WireItem['attribute'],
      value: target.dataset.value as string,
    });
    refreshDraft();
  } else if (target.matches('.rule-ref')) {
    const chain = [target.dataset.rule as string];
    element('provenance').innerHTML = renderProvenance(
      chain,
      rulesById,
      currentReport ? currentReport['supporting-cases'] : [],
    );
  }
}

function bind(): void {
  document.addEventListener('click', handleClicks);
  element('submit-enquiry').addEventListener('click', () => void submitEnquiry());
  element('mode-buttons').addEventListener('click', (event) => {
    const button = event.target as HTMLElement;
    const mode = button.dataset.mode as RetrievalMode | undefined;
    if (mode) {
      draft = setMode(draft, mode);
      void runRetrieval(draft.mode);
    }
  });
  element('feedback-helpful').addEventListener('click', () =>
    void submitFeedback('helpful'),
  );
  element('feedback-not-helpful').addEventListener('click', () =>
    void submitFeedback('not-helpful'),
  );
  element('refresh-kb').addEventListener('click', async () => {
    try {
      const outcome = await client.mine();
      currentFingerprint = outcome['kb-fingerprint'];
      await loadRules();
      refreshStaleness();
      element('kb-info').textContent =
        `${outcome.rules} rules, fingerprint ${outcome['kb-fingerprint']}`;
    } catch (err) {
      showError(err);
    }
  });
  element('mode-trace-help').innerHTML = renderModeTrace([]);
}

async function start(): Promise<void> {
  bind();
  refreshDraft();
  refreshHistory();
  try {
    await Promise.all([loadVocabulary(), loadRules()]);
  } catch (err) {
    showError(err);
  }
}

void start();
