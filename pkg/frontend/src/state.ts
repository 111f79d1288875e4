// Session-view state: score entry bookkeeping and the submission gate.
// Scores are free real numbers, lower = better; the form never invents or
// alters values, it only records what the decision maker typed.

import type { PendingBatch, Phase } from './api.js';

export interface ScoreEntry {
  candidateId: string;
  value: number | null;
}

export class ConsultationForm {
  private readonly order: string[];
  private readonly values = new Map<string, number | null>();

  constructor(batch: PendingBatch) {
    this.order = batch.candidates.map((c) => c.id);
    for (const id of this.order) {
      this.values.set(id, null);
    }
  }

  get entries(): ScoreEntry[] {
    return this.order.map((id) => ({ candidateId: id, value: this.values.get(id) ?? null }));
  }

  setScore(candidateId: string, value: number | null): void {
    if (!this.values.has(candidateId)) {
      throw new Error(`unknown candidate ${candidateId}`);
    }
    this.values.set(candidateId, value !== null && Number.isFinite(value) ? value : null);
  }

  // drag-to-rank: ranks 1..n are ordinary scores, lower = better
  assignRanks(rankedIds: string[]): void {
    rankedIds.forEach((id, position) => this.setScore(id, position + 1));
  }

  isComplete(): boolean {
    return this.order.every((id) => {
      const v = this.values.get(id);
      return v !== null && v !== undefined && Number.isFinite(v);
    });
  }

  toScoreMap(): Record<string, number> {
    if (!this.isComplete()) {
      throw new Error('scores are incomplete');
    }
    const out: Record<string, number> = {};
    for (const id of this.order) {
      out[id] = this.values.get(id) as number;
    }
    return out;
  }
}

export function canSubmit(phase: Phase, form: ConsultationForm | null): boolean {
  return phase === 'awaiting_scores' && form !== null && form.isComplete();
}

export function canAbort(phase: Phase): boolean {
  return phase === 'running' || phase === 'awaiting_scores';
}

export function isTerminal(phase: Phase): boolean {
  return phase === 'finished' || phase === 'aborted';
}
