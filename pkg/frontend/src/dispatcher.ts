import type { RoomConfigDraft } from "./types.js";

// Debounced, sequence-numbered dispatch: rapid edits collapse into one
// trailing request pair, and every dispatch carries a monotonically
// increasing sequence number so stale responses can be recognized.

export const DEBOUNCE_MS = 250;

export type SendFn = (draft: RoomConfigDraft, seq: number) => void;

export class DebouncedDispatcher {
  private timer: ReturnType<typeof setTimeout> | null = null;
  private seq = 0;

  constructor(
    private readonly send: SendFn,
    private readonly delayMs: number = DEBOUNCE_MS,
  ) {}

  /** Latest sequence number handed out; responses below this are stale. */
  get currentSeq(): number {
    return this.seq;
  }

  change(draft: RoomConfigDraft): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
    }
    const snapshot = { ...draft };
    this.timer = setTimeout(() => {
      this.timer = null;
      this.seq += 1;
      this.send(snapshot, this.seq);
    }, this.delayMs);
  }

  /** Dispatch immediately (initial load), bypassing the debounce window. */
  flush(draft: RoomConfigDraft): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    this.seq += 1;
    this.send({ ...draft }, this.seq);
  }
}
