// Typed client over fetch. The fetch implementation is injectable so the
// recorded-response tests can replay captured payloads offline.

import type {
  ApiError,
  FeedbackAck,
  MineOutcome,
  RetrievalMode,
  RetrievalResponse,
  Rule,
  SuggestionReport,
  TermNode,
  WireItem,
  WireRecord,
} from './types';

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiFailure extends Error {
  constructor(public readonly error: ApiError, public readonly status: number) {
    super(`${error.code}: ${error.message}`);
  }
}

export class Client {
  constructor(
    private readonly base: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { 'content-type': 'application/json' };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(this.base + path, init);
    const payload = await response.json();
    if (!response.ok) {
      throw new ApiFailure(payload as ApiError, response.status);
    }
    return payload as T;
  }

  postEnquiry(items: WireItem[], requestedAttributes?: string[]): Promise<SuggestionReport> {
    const body: Record<string, unknown> = {
      items: items.map((i) => ({ attribute: i.attribute, value: i.value })),
      mode: 'auto',
    };
    if (requestedAttributes && requestedAttributes.length > 0) {
      body['requested-attributes'] = requestedAttributes;
    }
    return this.request('POST', '/enquiries', body);
  }

  postRetrieval(items: WireItem[], mode: RetrievalMode): Promise<RetrievalResponse> {
    return this.request('POST', '/retrievals', {
      items: items.map((i) => ({ attribute: i.attribute, value: i.value })),
      mode,
    });
  }

  getRules(origin?: string): Promise<Rule[]> {
    const query = origin ? `?origin=${encodeURIComponent(origin)}` : '';
    return this.request('GET', `/rules${query}`);
  }

  getVocabulary(attribute?: string): Promise<TermNode[]> {
    const query = attribute ? `?attribute=${encodeURIComponent(attribute)}` : '';
    return this.request('GET', `/vocabulary${query}`);
  }

  getCase(id: string): Promise<WireRecord> {
    return this.request('GET', `/cases/${encodeURIComponent(id)}`);
  }

  retainCase(items: WireItem[], provenance: Record<string, unknown>): Promise<WireRecord> {
    return this.request('POST', '/cases', {
      items: items.map((i) => ({
        attribute: i.attribute,
        value: i.value,
        original: i.original ?? null,
      })),
      provenance,
    });
  }

  postFeedback(report: string, verdict: 'helpful' | 'not-helpful', note: string): Promise<FeedbackAck> {
    return this.request('POST', '/feedback', { report, verdict, note });
  }

  mine(): Promise<MineOutcome> {
    return this.request('POST', '/admin/mine', {});
  }
}
