import { describe, expect, it } from 'vitest';

import {
  addItem,
  emptyDraft,
  markFeedback,
  rememberReport,
  removeItem,
  setMode,
  toggleAttribute,
} from '../src/state';
import type { SuggestionReport, WireItem } from '../src/types';

import enquiryElasticity from './recorded/enquiry_elasticity.json';

const report = enquiryElasticity as unknown as SuggestionReport;

const elasticity: WireItem = { attribute: 'ServiceFeature', value: 'Elasticity' };
const storage: WireItem = { attribute: 'ServiceFeature', value: 'Storage' };

describe('enquiry draft', () => {
  it('collects distinct items', () => {
    let draft = emptyDraft();
    draft = addItem(draft, elasticity);
    draft = addItem(draft, elasticity);
    draft = addItem(draft, storage);
    expect(draft.items).toHaveLength(2);
    draft = removeItem(draft, elasticity);
    expect(draft.items).toEqual([storage]);
  });

  it('tracks mode and requested attributes', () => {
    let draft = setMode(emptyDraft(), 'heuristic');
    expect(draft.mode).toBe('heuristic');
    draft = toggleAttribute(draft, 'Metric');
    expect(draft.requestedAttributes).toEqual(['Metric']);
    draft = toggleAttribute(draft, 'Metric');
    expect(draft.requestedAttributes).toEqual([]);
  });
});

describe('report history', () => {
  it('keeps the newest report first and deduplicates by id', () => {
    let history = rememberReport([], report);
    history = rememberReport(history, report);
    expect(history).toHaveLength(1);
    expect(history[0].reportId).toBe(report.id);
    expect(history[0].enquirySummary).toContain('Elasticity');
  });

  it('marks feedback per report', () => {
    let history = rememberReport([], report);
    history = markFeedback(history, report.id);
    expect(history[0].submittedFeedback).toBe(true);
  });
});
