// Decision flow: optimistic removal with rollback, injected effects so the
// whole protocol (success / conflict / network failure) is testable.

import { ApiError, type Decision, type ReviewItem, type Stats } from './api.js';
import { removeItem, restoreItem, type QueueState } from './state.js';

export interface FlowEffects {
  postDecision(id: string, decision: Decision, reviewer: string): Promise<ReviewItem>;
  fetchItem(id: string): Promise<ReviewItem>;
  fetchStats(): Promise<Stats>;
  onState(state: QueueState): void;
  onStats(stats: Stats): void;
  onToast(message: string, kind: 'info' | 'error'): void;
}

export type FlowOutcome = 'decided' | 'conflict' | 'failed' | 'missing';

/**
 * Submit a decision for one row.
 *
 * The row leaves the queue immediately; on success the stats refresh, on a
 * 409 the row comes back showing the other reviewer's final state, and on a
 * network failure the row is restored untouched with an error toast.
 */
export async function submitDecision(
  state: QueueState,
  id: string,
  decision: Decision,
  reviewer: string,
  effects: FlowEffects,
): Promise<{ state: QueueState; outcome: FlowOutcome }> {
  const removal = removeItem(state, id);
  if (!removal.removed) return { state, outcome: 'missing' };
  let current = removal.state;
  effects.onState(current);
  try {
    const decided = await effects.postDecision(id, decision, reviewer);
    effects.onToast(`${decided.status}: ${decided.subject} → ${decided.object}`, 'info');
    effects.onStats(await effects.fetchStats());
    return { state: current, outcome: 'decided' };
  } catch (error) {
    if (error instanceof ApiError && error.status === 409) {
      // decided elsewhere: show the final state instead of the pending row
      const final = await effects.fetchItem(id);
      current = restoreItem(current, final, removal.index);
      effects.onState(current);
      effects.onToast(`already decided (${final.status})`, 'error');
      effects.onStats(await effects.fetchStats());
      return { state: current, outcome: 'conflict' };
    }
    current = restoreItem(current, removal.removed, removal.index);
    effects.onState(current);
    effects.onToast(`decision failed: ${String(error)}`, 'error');
    return { state: current, outcome: 'failed' };
  }
}
