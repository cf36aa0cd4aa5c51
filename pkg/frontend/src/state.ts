import type { PredictResponse, ExplainResponse, ResultPair, RoomConfigDraft } from "./types.js";

// Explorer state with the stale-response guard: a response is applied only if
// its sequence number exceeds that of the results currently displayed, so a
// slow response for an old draft can never overwrite a newer one.

export interface PinnedEntry {
  draft: RoomConfigDraft;
  prediction: PredictResponse;
}

export const MAX_PINNED = 3;

export class ExplorerState {
  draft: RoomConfigDraft | null = null;
  prediction: PredictResponse | null = null;
  explanation: ExplainResponse | null = null;
  error: string | null = null;
  inFlight = false;
  pinned: PinnedEntry[] = [];

  private appliedSeq = 0;

  get lastAppliedSeq(): number {
    return this.appliedSeq;
  }

  beginRequest(): void {
    this.inFlight = true;
  }

  /** Apply a completed request pair; returns false (and changes nothing) if stale. */
  applyResult(seq: number, result: ResultPair): boolean {
    if (seq <= this.appliedSeq) {
      return false;
    }
    this.appliedSeq = seq;
    this.prediction = result.prediction;
    this.explanation = result.explanation;
    this.error = null;
    this.inFlight = false;
    return true;
  }

  /** A failed request surfaces an error but keeps the previous values. */
  applyError(seq: number, message: string): boolean {
    if (seq <= this.appliedSeq) {
      return false;
    }
    this.appliedSeq = seq;
    this.error = message;
    this.inFlight = false;
    return true;
  }

  pinCurrent(): boolean {
    if (this.draft === null || this.prediction === null) {
      return false;
    }
    if (this.pinned.length >= MAX_PINNED) {
      return false;
    }
    this.pinned.push({ draft: { ...this.draft }, prediction: this.prediction });
    return true;
  }

  unpin(index: number): void {
    this.pinned.splice(index, 1);
  }
}

/** Signed per-group attributions for one metric, largest magnitude first. */
export function sortedBars(
  phi: Record<string, Record<string, number>>,
  metric: string,
): { group: string; value: number }[] {
  const entries = Object.entries(phi[metric] ?? {});
  return entries
    .map(([group, value]) => ({ group, value }))
    .sort((a, b) => Math.abs(b.value) - Math.abs(a.value));
}
