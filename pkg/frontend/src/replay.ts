/**
 * Playback control: one active session, a cursor that follows replay-tagged
 * events, scrub-by-restart, and client-side pause (rate 0 freezes rendering
 * because the server only accepts positive rates).
 */

import type { ApiClient } from './api.js';
import type { ConsoleStore } from './store.js';
import type { TrackRecord } from './records.js';

export interface ReplayRange {
  fromTs: number;
  toTs: number;
}

export class ReplayController {
  cursorTs: number | null = null;
  rate = 1.0;
  range: ReplayRange | null = null;
  eventsSeen = 0;
  startedAtMs: number | null = null;
  lastEventAtMs: number | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly store: ConsoleStore,
    private readonly now: () => number = () => Date.now(),
  ) {}

  /** Begin (or restart at a new cursor) a replay session. */
  async start(range: ReplayRange, rate: number): Promise<'started' | 'conflict'> {
    if (rate === 0) {
      // pause: keep the session, freeze rendering client-side
      this.store.paused = true;
      this.rate = 0;
      return 'started';
    }
    const result = await this.api.startReplay(range.fromTs, range.toTs, rate);
    if (result === 'started') {
      this.range = range;
      this.rate = rate;
      this.cursorTs = range.fromTs;
      this.eventsSeen = 0;
      this.startedAtMs = this.now();
      this.lastEventAtMs = null;
      this.store.enterReplay();
      this.store.paused = false;
    }
    return result;
  }

  /** Scrubbing restarts the session at the new cursor position. */
  async scrubTo(cursorTs: number): Promise<'started' | 'conflict'> {
    if (!this.range) throw new Error('no replay range selected');
    const clamped = Math.min(Math.max(cursorTs, this.range.fromTs), this.range.toTs);
    return this.start({ fromTs: clamped, toTs: this.range.toTs }, this.rate || 1.0);
  }

  /** Feed every stream event; replay-tagged ones advance the cursor. */
  onEvent(record: TrackRecord): void {
    if (!record.replay) return;
    this.eventsSeen += 1;
    this.lastEventAtMs = this.now();
    if (this.cursorTs === null || record.ts > this.cursorTs) {
      this.cursorTs = record.ts;
    }
  }

  /** Complete once the cursor reached the end of the selected range. */
  get complete(): boolean {
    return this.range !== null && this.cursorTs !== null && this.cursorTs >= this.range.toTs;
  }

  /** Wall-time length of the session so far, milliseconds. */
  elapsedMs(): number | null {
    if (this.startedAtMs === null) return null;
    return (this.lastEventAtMs ?? this.now()) - this.startedAtMs;
  }

  stop(): void {
    this.range = null;
    this.cursorTs = null;
    this.store.exitReplay();
    this.store.paused = false;
  }
}
