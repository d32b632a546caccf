/**
 * Track record grammar shared with the server.
 *
 * One record per line, single-space separated key=value fields in fixed
 * order; stream events may carry a trailing `replay=true` field.
 */

export type AssetKind = 'person' | 'support_equipment' | 'aircraft';
export type Source = 'gps_lora' | 'fiducial';

export interface TrackRecord {
  ts: number;
  kind: AssetKind;
  id: string;
  lat: number;
  lon: number;
  alt: number;
  source: Source;
  quality: number | null;
  replay: boolean;
}

const FIELD_ORDER = ['ts', 'kind', 'id', 'lat', 'lon', 'alt', 'source', 'quality'] as const;
const KINDS: ReadonlySet<string> = new Set(['person', 'support_equipment', 'aircraft']);
const SOURCES: ReadonlySet<string> = new Set(['gps_lora', 'fiducial']);

export class RecordParseError extends Error {}

export function parseRecord(line: string): TrackRecord {
  const tokens = line.trim().split(' ');
  let replay = false;
  if (tokens[tokens.length - 1] === 'replay=true') {
    replay = true;
    tokens.pop();
  }
  if (tokens.length !== FIELD_ORDER.length) {
    throw new RecordParseError(`expected ${FIELD_ORDER.length} fields, got ${tokens.length}`);
  }
  const values: Record<string, string> = {};
  for (let i = 0; i < FIELD_ORDER.length; i++) {
    const token = tokens[i];
    const eq = token.indexOf('=');
    if (eq < 0 || token.slice(0, eq) !== FIELD_ORDER[i]) {
      throw new RecordParseError(`expected field ${FIELD_ORDER[i]}, got ${token}`);
    }
    values[FIELD_ORDER[i]] = token.slice(eq + 1);
  }
  const ts = Number(values.ts);
  const lat = Number(values.lat);
  const lon = Number(values.lon);
  const alt = Number(values.alt);
  if (!Number.isInteger(ts)) throw new RecordParseError(`bad ts: ${values.ts}`);
  if (!Number.isFinite(lat) || !Number.isFinite(lon) || !Number.isFinite(alt)) {
    throw new RecordParseError(`bad position in: ${line}`);
  }
  if (!KINDS.has(values.kind)) throw new RecordParseError(`bad kind: ${values.kind}`);
  if (!SOURCES.has(values.source)) throw new RecordParseError(`bad source: ${values.source}`);
  const quality = values.quality === '' ? null : Number(values.quality);
  if (quality !== null && !Number.isFinite(quality)) {
    throw new RecordParseError(`bad quality: ${values.quality}`);
  }
  return {
    ts,
    kind: values.kind as AssetKind,
    id: values.id,
    lat,
    lon,
    alt,
    source: values.source as Source,
    quality,
    replay,
  };
}

/** Parse a multi-line body (e.g. /assets response), skipping blank lines. */
export function parseRecordLines(body: string): TrackRecord[] {
  return body
    .split('\n')
    .filter((line) => line.trim().length > 0)
    .map(parseRecord);
}

/** Serialize in the wire layout; used by tests for round-trip checks. */
export function formatRecord(r: TrackRecord): string {
  const quality = r.quality === null ? '' : r.quality.toFixed(3);
  const base =
    `ts=${r.ts} kind=${r.kind} id=${r.id} lat=${r.lat.toFixed(7)} ` +
    `lon=${r.lon.toFixed(7)} alt=${r.alt.toFixed(1)} source=${r.source} quality=${quality}`;
  return r.replay ? `${base} replay=true` : base;
}
