// Bootstrap: wire the API, state, and rendering together, plus the
// keyboard shortcuts reviewers lean on for long queues:
//   a = approve selected, r = reject selected, j/k = move selection.

import * as api from './api.js';
import { submitDecision } from './flow.js';
import { clearBanner, renderQueue, renderStats, showBanner, toast } from './render.js';
import { emptyState, moveSelection, selectedItem, withItems, type QueueState } from './state.js';

const queueEl = document.getElementById('queue') as HTMLElement;
const statsEl = document.getElementById('stats') as HTMLElement;
const bannerEl = document.getElementById('banner') as HTMLElement;
const toastEl = document.getElementById('toasts') as HTMLElement;
const reviewerEl = document.getElementById('reviewer') as HTMLInputElement;

let state: QueueState = emptyState();

reviewerEl.value = localStorage.getItem('kbp-reviewer') ?? 'expert';
reviewerEl.addEventListener('change', () => {
  localStorage.setItem('kbp-reviewer', reviewerEl.value);
});

function paint(): void {
  renderQueue(queueEl, state, {
    onSelect(index) {
      state = { ...state, selected: index };
      paint();
    },
    onDecide(id, decision) {
      void decide(id, decision);
    },
  });
}

async function refresh(): Promise<void> {
  try {
    const [items, stats] = await Promise.all([api.fetchQueue('pending'), api.fetchStats()]);
    clearBanner(bannerEl);
    state = withItems(state, items);
    paint();
    renderStats(statsEl, stats);
  } catch (error) {
    showBanner(bannerEl, `service unreachable: ${String(error)}`, () => void refresh());
  }
}

async function decide(id: string, decision: api.Decision): Promise<void> {
  const reviewer = reviewerEl.value.trim() || 'expert';
  const result = await submitDecision(state, id, decision, reviewer, {
    postDecision: api.postDecision,
    fetchItem: api.fetchItem,
    fetchStats: api.fetchStats,
    onState(next) {
      state = next;
      paint();
    },
    onStats(stats) {
      renderStats(statsEl, stats);
    },
    onToast(message, kind) {
      toast(toastEl, message, kind);
    },
  });
  state = result.state;
  paint();
}

document.addEventListener('keydown', (event) => {
  if (event.target instanceof HTMLInputElement) return;
  if (event.key === 'j') {
    state = moveSelection(state, 1);
    paint();
  } else if (event.key === 'k') {
    state = moveSelection(state, -1);
    paint();
  } else if (event.key === 'a' || event.key === 'r') {
    const item = selectedItem(state);
    if (item && item.status === 'pending') {
      void decide(item.id, event.key === 'a' ? 'approve' : 'reject');
    }
  }
});

void refresh();
