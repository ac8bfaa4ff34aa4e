// Pure queue-state helpers, kept free of DOM so they are unit-testable.

import type { ReviewItem, SentenceView } from './api.js';

export interface QueueState {
  items: ReviewItem[];
  selected: number;
}

export function emptyState(): QueueState {
  return { items: [], selected: 0 };
}

export function withItems(state: QueueState, items: ReviewItem[]): QueueState {
  return { items, selected: clamp(state.selected, items.length) };
}

function clamp(index: number, length: number): number {
  if (length === 0) return 0;
  return Math.min(Math.max(index, 0), length - 1);
}

export function moveSelection(state: QueueState, delta: number): QueueState {
  return { ...state, selected: clamp(state.selected + delta, state.items.length) };
}

export function selectedItem(state: QueueState): ReviewItem | undefined {
  return state.items[state.selected];
}

/** Optimistically drop a row; returns the new state plus what was removed. */
export function removeItem(
  state: QueueState,
  id: string,
): { state: QueueState; removed?: ReviewItem; index: number } {
  const index = state.items.findIndex((item) => item.id === id);
  if (index < 0) return { state, index: -1 };
  const items = state.items.slice();
  const [removed] = items.splice(index, 1);
  return { state: { items, selected: clamp(state.selected, items.length) }, removed, index };
}

/** Put a row back where it was (failure recovery / 409 final-state display). */
export function restoreItem(state: QueueState, item: ReviewItem, index: number): QueueState {
  const items = state.items.slice();
  const at = Math.min(Math.max(index, 0), items.length);
  items.splice(at, 0, item);
  return { items, selected: clamp(state.selected, items.length) };
}

export type TokenRole = 'subject' | 'object' | 'none';

export interface TokenSegment {
  text: string;
  role: TokenRole;
}

/** Split sentence tokens into contiguous segments by argument role so the
 * view can highlight subject and object spans. */
export function highlightSegments(sentence: SentenceView): TokenSegment[] {
  const roles: TokenRole[] = sentence.tokens.map(() => 'none');
  for (const [start, end] of sentence.subject_spans ?? []) {
    for (let i = start; i < end && i < roles.length; i++) roles[i] = 'subject';
  }
  for (const [start, end] of sentence.object_spans ?? []) {
    for (let i = start; i < end && i < roles.length; i++) roles[i] = 'object';
  }
  const segments: TokenSegment[] = [];
  sentence.tokens.forEach((token, i) => {
    const last = segments[segments.length - 1];
    if (last && last.role === roles[i]) {
      last.text += ` ${token}`;
    } else {
      segments.push({ text: token, role: roles[i] });
    }
  });
  return segments;
}
