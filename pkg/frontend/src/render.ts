// View functions: every screen fragment is rendered to an HTML string from
// server payloads alone, which keeps the views testable against recorded
// responses and guarantees no client-side re-derivation.

import type {
  HistoryEntry,
} from './state';
import type {
  Rational,
  RetrievalResult,
  Rule,
  Suggestion,
  SuggestionReport,
  TermNode,
  TraceStage,
  WireItem,
} from './types';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export function formatRational(value: Rational): string {
  if (value.den === 1) {
    return value.num === 1 ? '1' : String(value.num);
  }
  const percent = ((100 * value.num) / value.den).toFixed(0);
  return `${value.num}/${value.den} (≈${percent}%)`;
}

function itemChip(item: WireItem, removable = false): string {
  const removeButton = removable
    ? `<button class="chip-remove" data-attribute="${escapeHtml(item.attribute)}"` +
      ` data-value="${escapeHtml(item.value)}">×</button>`
    : '';
  return (
    `<span class="chip chip-${item.attribute.toLowerCase()}">` +
    `<span class="chip-attr">${escapeHtml(item.attribute)}</span>` +
    `${escapeHtml(item.value)}${removeButton}</span>`
  );
}

// -- enquiry builder ---------------------------------------------------------

/** Term picker: children are nested and indented under their parents so the
 * generalization structure is visible while picking. */
export function renderVocabularyTree(roots: TermNode[]): string {
  const renderNode = (node: TermNode, depth: number): string => {
    const synonyms = node.synonyms.length
      ? `<span class="synonyms">also: ${node.synonyms.map(escapeHtml).join(', ')}</span>`
      : '';
    const children = node.children
      .map((child) => renderNode(child, depth + 1))
      .join('');
    return (
      `<li class="term depth-${depth}" style="margin-left:${depth}rem">` +
      `<button class="term-pick" data-attribute="${escapeHtml(node.attribute)}"` +
      ` data-value="${escapeHtml(node.label)}">${escapeHtml(node.label)}</button>` +
      `${synonyms}${children ? `<ul>${children}</ul>` : ''}</li>`
    );
  };
  return `<ul class="term-tree">${roots.map((r) => renderNode(r, 0)).join('')}</ul>`;
}

export function renderDraftItems(items: WireItem[]): string {
  if (items.length === 0) {
    return '<p class="empty">Pick terms from the vocabulary to build an enquiry.</p>';
  }
  return `<div class="draft-items">${items.map((i) => itemChip(i, true)).join('')}</div>`;
}

// -- suggestion report ---------------------------------------------------------

function renderSuggestionEntry(entry: Suggestion): string {
  return (
    `<li class="suggestion" data-item-value="${escapeHtml(entry.item.value)}">` +
    `${itemChip(entry.item)}` +
    `<span class="confidence">confidence ${formatRational(entry.confidence)}</span>` +
    `${renderDerivationChain(entry.derivation.chain)}</li>`
  );
}

export function renderDerivationChain(chain: string[]): string {
  const steps = chain
    .map((ruleId) => `<code class="rule-ref" data-rule="${escapeHtml(ruleId)}">${escapeHtml(ruleId)}</code>`)
    .join(' → ');
  return `<span class="derivation" title="rule chain">${steps}</span>`;
}

/** Suggestions grouped the way evaluators use them: scenarios first (the
 * environment/manipulation combination), then metrics and benchmarks. */
export function renderSuggestions(report: SuggestionReport): string {
  const groups = report.suggestions;
  const environments = groups.Environment ?? [];
  const manipulations = groups.Manipulation ?? [];
  const metrics = groups.Metric ?? [];
  const benchmarks = groups.Benchmark ?? [];
  const rest = (['Requirement', 'ServiceFeature'] as const)
    .flatMap((attribute) => groups[attribute] ?? []);

  const section = (title: string, entries: Suggestion[]): string => {
    if (entries.length === 0) {
      return '';
    }
    return (
      `<section class="suggestion-group"><h3>${escapeHtml(title)}</h3>` +
      `<ul>${entries.map(renderSuggestionEntry).join('')}</ul></section>`
    );
  };

  const scenario =
    environments.length || manipulations.length
      ? `<section class="suggestion-group scenarios"><h3>Scenarios</h3>` +
        `<p class="hint">combine an environment with an operation</p>` +
        `<ul>${environments.map(renderSuggestionEntry).join('')}` +
        `${manipulations.map(renderSuggestionEntry).join('')}</ul></section>`
      : '';

  const body =
    scenario +
    section('Metrics', metrics) +
    section('Benchmarks', benchmarks) +
    section('Related', rest);
  if (!body) {
    return '<p class="empty">No rule-derived suggestions for this enquiry.</p>';
  }
  return body;
}

// -- retrieval results ---------------------------------------------------------

export function renderModeTrace(trace: TraceStage[]): string {
  const stages = trace
    .map((stage) => {
      const outcome =
        stage.skipped !== undefined
          ? `skipped (${escapeHtml(stage.skipped)})`
          : `${stage.results} result${stage.results === 1 ? '' : 's'}`;
      return `<li class="trace-stage"><strong>${stage.mode}</strong>: ${outcome}</li>`;
    })
    .join('');
  return `<ol class="mode-trace">${stages}</ol>`;
}

export const FUZZY_CAVEAT =
  'Fuzzy results come from an incomplete enquiry and are not guaranteed to be relevant.';

export function renderResult(result: RetrievalResult): string {
  const record = result.record;
  const provenance = record.provenance;
  const dropped = result['dropped-items'];
  const droppedBadge = dropped.length
    ? `<span class="badge badge-dropped" title="${escapeHtml(FUZZY_CAVEAT)}">` +
      `dropped: ${dropped.map((i) => escapeHtml(i.value)).join(', ')}</span>`
    : '';
  const matched = result['matched-items'];
  const matchedNote = matched.length
    ? `<div class="matched">matched ${matched.map((i) => itemChip(i)).join('')}</div>`
    : '';
  const rules = result['rules-applied'];
  const rulesNote = rules.length
    ? `<div class="enabling">via ${renderDerivationChain(rules)}</div>`
    : '';
  return (
    `<article class="result" data-record="${escapeHtml(record.id)}">` +
    `<header><strong>${escapeHtml(record.id)}</strong>` +
    `<span class="badge badge-mode">${result['mode-used']}</span>${droppedBadge}` +
    `<span class="score">score ${formatRational(result.score)}</span></header>` +
    `<p class="provenance">${escapeHtml(provenance.study)} · ` +
    `${escapeHtml(provenance.provider)} · ${escapeHtml(provenance.service)} · ` +
    `${provenance.year}</p>` +
    `<div class="items">${record.items.map((i) => itemChip(i)).join('')}</div>` +
    `${matchedNote}${rulesNote}</article>`
  );
}

export function renderResults(results: RetrievalResult[], trace: TraceStage[]): string {
  const caveat = results.some((r) => r['mode-used'] === 'fuzzy')
    ? `<p class="caveat">${escapeHtml(FUZZY_CAVEAT)}</p>`
    : '';
  const body = results.length
    ? results.map(renderResult).join('')
    : '<p class="empty">Nothing retrieved at any attempted mode.</p>';
  return `${renderModeTrace(trace)}${caveat}<div class="results">${body}</div>`;
}

// -- provenance drawer -----------------------------------------------------------

export function renderRule(rule: Rule): string {
  const antecedent = rule.antecedent.map((i) => itemChip(i)).join(' + ');
  return (
    `<div class="rule" id="rule-${escapeHtml(rule.id)}">` +
    `<span class="badge badge-${rule.origin}">${rule.origin}</span>` +
    `${antecedent} → ${itemChip(rule.consequent)}` +
    `<span class="stats">coverage ${rule.coverage}, accuracy ${formatRational(rule.accuracy)}</span>` +
    `</div>`
  );
}

/** Drawer content for one suggestion: its chain, rule by rule, and the
 * supporting cases with study provenance. */
export function renderProvenance(
  chain: string[],
  rulesById: Map<string, Rule>,
  supporting: RetrievalResult[],
): string {
  const steps = chain
    .map((ruleId) => {
      const rule = rulesById.get(ruleId);
      return rule
        ? renderRule(rule)
        : `<div class="rule missing">unknown rule ${escapeHtml(ruleId)}</div>`;
    })
    .join('');
  const cases = supporting.length
    ? supporting.map(renderResult).join('')
    : '<p class="empty">No supporting cases in the store.</p>';
  return (
    `<div class="provenance-drawer"><h3>Rule chain</h3>${steps}` +
    `<h3>Supporting cases</h3>${cases}</div>`
  );
}

// -- banners, toasts, history --------------------------------------------------

export function renderStaleBanner(reportFingerprint: string, currentFingerprint: string): string {
  return (
    `<div class="banner banner-stale">This report was computed against ` +
    `knowledge base <code>${escapeHtml(reportFingerprint)}</code>, but the server ` +
    `is now at <code>${escapeHtml(currentFingerprint)}</code>. Re-run the enquiry ` +
    `for up-to-date suggestions.</div>`
  );
}

export function renderFeedbackToast(count: number): string {
  return `<div class="toast">Feedback recorded (${count} for this report).</div>`;
}

export function renderHistory(history: HistoryEntry[]): string {
  if (history.length === 0) {
    return '<p class="empty">No reports yet.</p>';
  }
  const rows = history
    .map(
      (entry) =>
        `<li class="history-entry" data-report="${escapeHtml(entry.reportId)}">` +
        `<code>${escapeHtml(entry.reportId)}</code> ` +
        `${escapeHtml(entry.enquirySummary)}` +
        `${entry.submittedFeedback ? '<span class="badge">feedback sent</span>' : ''}</li>`,
    )
    .join('');
  return `<ul class="history">${rows}</ul>`;
}
