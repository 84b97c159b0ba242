// Client round-trips against a stubbed fetch replaying recorded responses.

import { describe, expect, it } from 'vitest';

import { ApiFailure, Client, FetchLike } from '../src/api';
import type { FeedbackAck, SuggestionReport } from '../src/types';

import enquiryElasticity from './recorded/enquiry_elasticity.json';
import feedbackAck from './recorded/feedback_ack.json';

interface Call {
  url: string;
  method?: string;
  body?: string;
}

function stub(status: number, payload: unknown, calls: Call[]): FetchLike {
  return async (url, init) => {
    calls.push({ url, method: init?.method, body: init?.body as string });
    return new Response(JSON.stringify(payload), {
      status,
      headers: { 'content-type': 'application/json' },
    });
  };
}

describe('client', () => {
  it('posts an enquiry and returns the report', async () => {
    const calls: Call[] = [];
    const client = new Client('http://server', stub(200, enquiryElasticity, calls));
    const report: SuggestionReport = await client.postEnquiry([
      { attribute: 'ServiceFeature', value: 'Elasticity' },
    ]);
    expect(calls[0].url).toBe('http://server/enquiries');
    expect(JSON.parse(calls[0].body as string)).toEqual({
      items: [{ attribute: 'ServiceFeature', value: 'Elasticity' }],
      mode: 'auto',
    });
    expect(report['kb-fingerprint']).toBeTruthy();
    expect(report.suggestions.Metric?.[0].item.value).toBe('VM Boosting Latency');
  });

  it('round-trips feedback', async () => {
    const calls: Call[] = [];
    const client = new Client('http://server', stub(201, feedbackAck, calls));
    const ack: FeedbackAck = await client.postFeedback(
      (feedbackAck as FeedbackAck).report,
      'helpful',
      'useful',
    );
    expect(calls[0].method).toBe('POST');
    expect(calls[0].url).toBe('http://server/feedback');
    expect(JSON.parse(calls[0].body as string)).toEqual({
      report: (feedbackAck as FeedbackAck).report,
      verdict: 'helpful',
      note: 'useful',
    });
    expect(ack.status).toBe('recorded');
    expect(ack['feedback-count']).toBeGreaterThan(0);
  });

  it('surfaces engine error codes', async () => {
    const calls: Call[] = [];
    const client = new Client(
      'http://server',
      stub(404, { code: 'not-found', message: 'unknown report' }, calls),
    );
    await expect(client.postFeedback('rep-missing', 'helpful', '')).rejects.toThrow(
      ApiFailure,
    );
    await client.postFeedback('rep-missing', 'helpful', '').catch((err: ApiFailure) => {
      expect(err.status).toBe(404);
      expect(err.error.code).toBe('not-found');
    });
  });

  it('passes retrieval mode through', async () => {
    const calls: Call[] = [];
    const client = new Client(
      'http://server',
      stub(200, { results: [], 'mode-trace': [] }, calls),
    );
    await client.postRetrieval(
      [{ attribute: 'ServiceFeature', value: 'Horizontal Scalability' }],
      'fuzzy',
    );
    expect(JSON.parse(calls[0].body as string).mode).toBe('fuzzy');
  });
});
