/**
 * Map viewport math: a local equirectangular projection around the view
 * center. Pure functions of (viewport, lat/lon), so the render layer stays
 * a dumb consumer and marker positions remain exactly the received fixes.
 */

import type { ConsoleStore, Marker, TrailPoint } from './store.js';

const EARTH_RADIUS_M = 6_371_000;
const DEG = Math.PI / 180;

export interface Viewport {
  centerLat: number;
  centerLon: number;
  /** pixels per metre on the ground */
  scale: number;
  widthPx: number;
  heightPx: number;
}

export interface ScreenPoint {
  x: number;
  y: number;
}

export function project(vp: Viewport, lat: number, lon: number): ScreenPoint {
  const east = (lon - vp.centerLon) * DEG * Math.cos(vp.centerLat * DEG) * EARTH_RADIUS_M;
  const north = (lat - vp.centerLat) * DEG * EARTH_RADIUS_M;
  return {
    x: vp.widthPx / 2 + east * vp.scale,
    y: vp.heightPx / 2 - north * vp.scale,
  };
}

export function unproject(vp: Viewport, p: ScreenPoint): { lat: number; lon: number } {
  const east = (p.x - vp.widthPx / 2) / vp.scale;
  const north = (vp.heightPx / 2 - p.y) / vp.scale;
  return {
    lat: vp.centerLat + north / EARTH_RADIUS_M / DEG,
    lon: vp.centerLon + east / (EARTH_RADIUS_M * Math.cos(vp.centerLat * DEG)) / DEG,
  };
}

export interface MarkerSprite {
  marker: Marker;
  at: ScreenPoint;
  trail: ScreenPoint[];
}

export const KIND_GLYPHS: Record<string, string> = {
  person: 'P',
  support_equipment: 'S',
  aircraft: 'A',
};

/** Everything the DOM layer needs to draw one frame. */
export function renderList(store: ConsoleStore, vp: Viewport): MarkerSprite[] {
  return store.visibleMarkers().map((marker) => ({
    marker,
    at: project(vp, marker.lat, marker.lon),
    trail: store.trailOf(marker.id).map((p: TrailPoint) => project(vp, p.lat, p.lon)),
  }));
}

/** Center the viewport on the markers' bounding box. */
export function fitViewport(markers: Marker[], widthPx: number, heightPx: number): Viewport {
  if (markers.length === 0) {
    return { centerLat: 0, centerLon: 0, scale: 1, widthPx, heightPx };
  }
  const lats = markers.map((m) => m.lat);
  const lons = markers.map((m) => m.lon);
  const centerLat = (Math.min(...lats) + Math.max(...lats)) / 2;
  const centerLon = (Math.min(...lons) + Math.max(...lons)) / 2;
  const spanNorth = (Math.max(...lats) - Math.min(...lats)) * DEG * EARTH_RADIUS_M;
  const spanEast =
    (Math.max(...lons) - Math.min(...lons)) * DEG * Math.cos(centerLat * DEG) * EARTH_RADIUS_M;
  const span = Math.max(spanNorth, spanEast, 50);
  const scale = (0.8 * Math.min(widthPx, heightPx)) / span;
  return { centerLat, centerLon, scale, widthPx, heightPx };
}
