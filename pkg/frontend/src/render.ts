// DOM construction for the queue view. Everything displayed comes straight
// from API payloads; this module formats, it does not compute.

import type { ReviewItem, Stats } from './api.js';
import { highlightSegments, type QueueState } from './state.js';

export interface RowHandlers {
  onSelect(index: number): void;
  onDecide(id: string, decision: 'approve' | 'reject'): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderSentence(item: ReviewItem): HTMLElement {
  const block = el('div', 'sentences');
  for (const sentence of item.sentences) {
    const line = el('p', 'sentence');
    for (const segment of highlightSegments(sentence)) {
      if (segment.role === 'none') {
        line.appendChild(document.createTextNode(` ${segment.text} `));
      } else {
        const mark = el('mark', segment.role, segment.text);
        line.appendChild(mark);
      }
    }
    line.appendChild(el('span', 'sentence-id', sentence.sentence_id));
    block.appendChild(line);
  }
  return block;
}

function renderRow(
  item: ReviewItem,
  index: number,
  selected: boolean,
  handlers: RowHandlers,
): HTMLElement {
  const row = el('article', `row status-${item.status}${selected ? ' selected' : ''}`);
  row.dataset.id = item.id;

  const head = el('header', 'row-head');
  const triple = el('span', 'triple');
  triple.appendChild(el('strong', 'subject', item.subject));
  triple.appendChild(el('span', 'predicate', ` ${item.predicate.value} `));
  triple.appendChild(el('strong', 'object', item.object));
  head.appendChild(triple);
  head.appendChild(el('span', 'confidence', item.fused_confidence.toFixed(3)));
  row.appendChild(head);

  const badges = el('div', 'badges');
  for (const extractor of item.extractors) {
    badges.appendChild(el('span', 'badge', extractor));
  }
  if (item.status !== 'pending') {
    badges.appendChild(el('span', `badge decision ${item.status}`, item.status));
  }
  row.appendChild(badges);
  row.appendChild(renderSentence(item));

  if (item.status === 'pending') {
    const actions = el('div', 'actions');
    const approve = el('button', 'approve', 'approve (a)');
    approve.addEventListener('click', () => handlers.onDecide(item.id, 'approve'));
    const reject = el('button', 'reject', 'reject (r)');
    reject.addEventListener('click', () => handlers.onDecide(item.id, 'reject'));
    actions.appendChild(approve);
    actions.appendChild(reject);
    row.appendChild(actions);
  }
  row.addEventListener('click', () => handlers.onSelect(index));
  return row;
}

export function renderQueue(
  container: HTMLElement,
  state: QueueState,
  handlers: RowHandlers,
): void {
  container.replaceChildren();
  if (state.items.length === 0) {
    container.appendChild(el('p', 'empty', 'no pending triples'));
    return;
  }
  state.items.forEach((item, index) => {
    container.appendChild(renderRow(item, index, index === state.selected, handlers));
  });
}

export function renderStats(container: HTMLElement, stats: Stats): void {
  container.replaceChildren();
  const entries: [string, number][] = [
    ['pending', stats.pending],
    ['approved', stats.approved],
    ['rejected', stats.rejected],
    ['kb facts', stats.kb_facts],
  ];
  for (const [label, value] of entries) {
    const cell = el('span', 'stat');
    cell.appendChild(el('strong', undefined, String(value)));
    cell.appendChild(document.createTextNode(` ${label}`));
    container.appendChild(cell);
  }
}

export function showBanner(container: HTMLElement, message: string, onRetry: () => void): void {
  container.replaceChildren();
  const banner = el('div', 'banner error');
  banner.appendChild(el('span', undefined, message));
  const retry = el('button', undefined, 'retry');
  retry.addEventListener('click', onRetry);
  banner.appendChild(retry);
  container.appendChild(banner);
}

export function clearBanner(container: HTMLElement): void {
  container.replaceChildren();
}

export function toast(container: HTMLElement, message: string, kind: 'info' | 'error'): void {
  const note = el('div', `toast ${kind}`, message);
  container.appendChild(note);
  setTimeout(() => note.remove(), 4000);
}
