import { describe, expect, it } from 'vitest';

import type { TrackRecord } from '../src/records.js';
import { ConsoleStore } from '../src/store.js';
import { fitViewport, project, renderList, unproject, type Viewport } from '../src/view.js';

const VP: Viewport = { centerLat: 39.0458, centerLon: -74.35, scale: 2.0, widthPx: 1600, heightPx: 900 };

describe('viewport projection', () => {
  it('centers the view center', () => {
    expect(project(VP, 39.0458, -74.35)).toEqual({ x: 800, y: 450 });
  });

  it('north is up, east is right', () => {
    const north = project(VP, 39.0468, -74.35);
    const east = project(VP, 39.0458, -74.3489);
    expect(north.y).toBeLessThan(450);
    expect(north.x).toBeCloseTo(800, 6);
    expect(east.x).toBeGreaterThan(800);
  });

  it('unproject inverts project', () => {
    const p = project(VP, 39.0463, -74.3493);
    const geo = unproject(VP, p);
    expect(geo.lat).toBeCloseTo(39.0463, 9);
    expect(geo.lon).toBeCloseTo(-74.3493, 9);
  });

  it('fitViewport covers all markers inside the canvas', () => {
    const markers = [
      { id: 'a', kind: 'person' as const, lat: 39.04, lon: -74.36, alt: 0, ts: 1, source: 's', quality: null },
      { id: 'b', kind: 'person' as const, lat: 39.06, lon: -74.33, alt: 0, ts: 1, source: 's', quality: null },
    ];
    const vp = fitViewport(markers, 1600, 900);
    for (const m of markers) {
      const p = project(vp, m.lat, m.lon);
      expect(p.x).toBeGreaterThanOrEqual(0);
      expect(p.x).toBeLessThanOrEqual(1600);
      expect(p.y).toBeGreaterThanOrEqual(0);
      expect(p.y).toBeLessThanOrEqual(900);
    }
  });

  it('renderList projects markers and trails without altering positions', () => {
    const store = new ConsoleStore();
    const base: TrackRecord = {
      ts: 1, kind: 'aircraft', id: 'AC', lat: 39.0458, lon: -74.35, alt: 0,
      source: 'fiducial', quality: 0.2, replay: false,
    };
    store.applyEvent(base);
    store.applyEvent({ ...base, ts: 2, lat: 39.0460 });
    const sprites = renderList(store, VP);
    expect(sprites).toHaveLength(1);
    expect(sprites[0].marker.lat).toBe(39.046); // exactly the received fix
    expect(sprites[0].trail).toHaveLength(2);
    expect(sprites[0].at).toEqual(project(VP, 39.046, -74.35));
  });
});
