/** Thin typed client for the tracking service endpoints. */

import { parseRecordLines, type TrackRecord } from './records.js';

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  async assets(): Promise<TrackRecord[]> {
    const resp = await this.fetchImpl(`${this.baseUrl}/assets`);
    if (!resp.ok) throw new Error(`/assets failed: ${resp.status}`);
    return parseRecordLines(await resp.text());
  }

  async track(assetId: string, fromTs: number, toTs: number): Promise<TrackRecord[]> {
    const resp = await this.fetchImpl(
      `${this.baseUrl}/assets/${encodeURIComponent(assetId)}/track?from=${fromTs}&to=${toTs}`,
    );
    if (!resp.ok) throw new Error(`/track failed: ${resp.status}`);
    return parseRecordLines(await resp.text());
  }

  async health(): Promise<Record<string, number>> {
    const resp = await this.fetchImpl(`${this.baseUrl}/health`);
    if (!resp.ok) throw new Error(`/health failed: ${resp.status}`);
    const out: Record<string, number> = {};
    for (const line of (await resp.text()).split('\n')) {
      const eq = line.indexOf('=');
      if (eq > 0) out[line.slice(0, eq)] = Number(line.slice(eq + 1));
    }
    return out;
  }

  /** Start a replay; resolves 'started' or 'conflict' (one session at a time). */
  async startReplay(fromTs: number, toTs: number, rate: number | 'inf'): Promise<'started' | 'conflict'> {
    const body = `from=${fromTs} to=${toTs} rate=${rate === 'inf' ? 'inf' : rate}`;
    const resp = await this.fetchImpl(`${this.baseUrl}/replay`, { method: 'POST', body });
    if (resp.status === 409) return 'conflict';
    if (!resp.ok) throw new Error(`/replay failed: ${resp.status}`);
    return 'started';
  }

  streamUrl(): string {
    return `${this.baseUrl}/stream`;
  }
}
