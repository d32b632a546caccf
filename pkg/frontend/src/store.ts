/**
 * Console state: latest marker and a bounded trail per asset, kind/id
 * filters, and a live/replay mode switch.
 *
 * The console holds no authoritative state: everything here can be
 * reconstructed from a `/assets` snapshot plus the event stream, and marker
 * positions are exactly the lat/lon received (no smoothing).
 */

import type { AssetKind, TrackRecord } from './records.js';

export interface Marker {
  id: string;
  kind: AssetKind;
  lat: number;
  lon: number;
  alt: number;
  ts: number;
  source: string;
  quality: number | null;
}

export interface TrailPoint {
  lat: number;
  lon: number;
  ts: number;
}

export const TRAIL_CAP = 500;

export type Mode = 'live' | 'replay';

class AssetTrack {
  marker: Marker;
  trail: TrailPoint[] = [];
  private seenTs = new Set<number>();

  constructor(record: TrackRecord) {
    this.marker = toMarker(record);
    this.push(record);
  }

  /** Apply one event; duplicates per (asset, ts) are ignored. */
  apply(record: TrackRecord): boolean {
    if (this.seenTs.has(record.ts)) {
      return false;
    }
    this.push(record);
    if (record.ts >= this.marker.ts) {
      this.marker = toMarker(record);
    }
    return true;
  }

  private push(record: TrackRecord): void {
    this.seenTs.add(record.ts);
    this.trail.push({ lat: record.lat, lon: record.lon, ts: record.ts });
    while (this.trail.length > TRAIL_CAP) {
      const evicted = this.trail.shift()!;
      this.seenTs.delete(evicted.ts);
    }
  }
}

function toMarker(r: TrackRecord): Marker {
  return {
    id: r.id,
    kind: r.kind,
    lat: r.lat,
    lon: r.lon,
    alt: r.alt,
    ts: r.ts,
    source: r.source,
    quality: r.quality,
  };
}

export class ConsoleStore {
  mode: Mode = 'live';
  /** rendering freeze for rate-0 "pause": events still apply, view holds */
  paused = false;
  private live = new Map<string, AssetTrack>();
  private replayLayer = new Map<string, AssetTrack>();
  private kindFilter: Set<AssetKind> | null = null;
  private idFilter: Set<string> | null = null;

  /** Route one stream event; returns true when it changed state. */
  applyEvent(record: TrackRecord): boolean {
    const layer = record.replay ? this.replayLayer : this.live;
    const existing = layer.get(record.id);
    if (existing) {
      return existing.apply(record);
    }
    layer.set(record.id, new AssetTrack(record));
    return true;
  }

  /** Rebuild the live layer from a `/assets` snapshot (refresh or reconnect). */
  resyncFromSnapshot(records: TrackRecord[]): void {
    this.live = new Map();
    for (const r of records) {
      this.live.set(r.id, new AssetTrack(r));
    }
  }

  enterReplay(): void {
    this.mode = 'replay';
    this.replayLayer = new Map();
  }

  exitReplay(): void {
    this.mode = 'live';
    this.replayLayer = new Map();
  }

  setKindFilter(kinds: AssetKind[] | null): void {
    this.kindFilter = kinds === null ? null : new Set(kinds);
  }

  setIdFilter(ids: string[] | null): void {
    this.idFilter = ids === null ? null : new Set(ids);
  }

  private activeLayer(): Map<string, AssetTrack> {
    return this.mode === 'replay' ? this.replayLayer : this.live;
  }

  private passesFilter(marker: Marker): boolean {
    if (this.kindFilter !== null && !this.kindFilter.has(marker.kind)) return false;
    if (this.idFilter !== null && !this.idFilter.has(marker.id)) return false;
    return true;
  }

  /** Markers of the active layer, filters applied, ordered by asset id. */
  visibleMarkers(): Marker[] {
    const out: Marker[] = [];
    for (const track of this.activeLayer().values()) {
      if (this.passesFilter(track.marker)) {
        out.push(track.marker);
      }
    }
    return out.sort((a, b) => a.id.localeCompare(b.id));
  }

  /** All markers in the active layer regardless of filters. */
  allMarkers(): Marker[] {
    return [...this.activeLayer().values()].map((t) => t.marker).sort((a, b) => a.id.localeCompare(b.id));
  }

  trailOf(id: string): TrailPoint[] {
    const track = this.activeLayer().get(id);
    return track ? [...track.trail] : [];
  }

  /** Comparable digest of latest state: id -> [lat, lon, ts]. */
  markerDigest(): Record<string, [number, number, number]> {
    const digest: Record<string, [number, number, number]> = {};
    for (const m of this.allMarkers()) {
      digest[m.id] = [m.lat, m.lon, m.ts];
    }
    return digest;
  }
}
