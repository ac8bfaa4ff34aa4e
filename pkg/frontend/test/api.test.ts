import { afterEach, describe, expect, it, vi } from 'vitest';

import { ApiError, fetchQueue, fetchStats, postDecision } from '../src/api.js';

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'Content-Type': 'application/json' },
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe('api client', () => {
  it('fetchQueue hits the documented path and unwraps items', async () => {
    const fetchMock = vi.fn(async () => jsonResponse({ items: [] }));
    vi.stubGlobal('fetch', fetchMock);
    const items = await fetchQueue('pending', 5);
    expect(items).toEqual([]);
    expect(fetchMock).toHaveBeenCalledWith('/api/queue?status=pending&limit=5', undefined);
  });

  it('postDecision sends the JSON body the service expects', async () => {
    const fetchMock = vi.fn(async () => jsonResponse({ id: 'x', status: 'approved' }));
    vi.stubGlobal('fetch', fetchMock);
    await postDecision('x', 'approve', 'alice');
    const [url, init] = fetchMock.mock.calls[0] as unknown as [string, RequestInit];
    expect(url).toBe('/api/items/x/decision');
    expect(init.method).toBe('POST');
    expect(JSON.parse(init.body as string)).toEqual({ decision: 'approve', reviewer: 'alice' });
  });

  it('non-2xx becomes an ApiError carrying the status', async () => {
    vi.stubGlobal('fetch', vi.fn(async () => jsonResponse({ detail: 'already decided' }, 409)));
    await expect(postDecision('x', 'reject', 'bob')).rejects.toMatchObject({
      name: 'ApiError',
      status: 409,
      message: 'already decided',
    });
  });

  it('network failures propagate untouched', async () => {
    vi.stubGlobal('fetch', vi.fn(async () => {
      throw new TypeError('fetch failed');
    }));
    await expect(fetchStats()).rejects.toBeInstanceOf(TypeError);
  });

  it('ApiError is distinguishable from transport errors', () => {
    expect(new ApiError(404, 'nope')).toBeInstanceOf(Error);
  });
});
