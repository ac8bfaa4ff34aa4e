// Typed client for the review-service HTTP API. Every state change in the
// UI round-trips through these calls; nothing is recomputed client-side.

export interface Support {
  extractor: string;
  confidence: number;
  sentence_id: string;
}

export interface SentenceView {
  sentence_id: string;
  text: string;
  tokens: string[];
  subject_spans?: [number, number][];
  object_spans?: [number, number][];
}

export interface ReviewItem {
  id: string;
  subject: string;
  predicate: { kind: string; value: string };
  object: string;
  fused_confidence: number;
  extractors: string[];
  supports: Support[];
  sentences: SentenceView[];
  status: 'pending' | 'approved' | 'rejected';
  reviewer: string;
  decided_at: string;
}

export interface Stats {
  pending: number;
  approved: number;
  rejected: number;
  kb_facts: number;
}

export type Decision = 'approve' | 'reject';

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
    this.name = 'ApiError';
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(path, init);
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && typeof body.detail === 'string') detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export function fetchQueue(status = 'pending', limit?: number): Promise<ReviewItem[]> {
  const params = new URLSearchParams({ status });
  if (limit !== undefined) params.set('limit', String(limit));
  return request<{ items: ReviewItem[] }>(`/api/queue?${params}`).then((body) => body.items);
}

export function fetchItem(id: string): Promise<ReviewItem> {
  return request<ReviewItem>(`/api/items/${encodeURIComponent(id)}`);
}

export function postDecision(id: string, decision: Decision, reviewer: string): Promise<ReviewItem> {
  return request<ReviewItem>(`/api/items/${encodeURIComponent(id)}/decision`, {
    method: 'POST',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify({ decision, reviewer }),
  });
}

export function fetchStats(): Promise<Stats> {
  return request<Stats>('/api/stats');
}
