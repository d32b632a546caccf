import { describe, expect, it } from 'vitest';

import { formatRecord, parseRecord, parseRecordLines, RecordParseError } from '../src/records.js';

const LINE =
  'ts=1700000000062 kind=person id=U00 lat=39.0458000 lon=-74.3500000 alt=1.0 source=gps_lora quality=100.000';

describe('record grammar', () => {
  it('parses a live record', () => {
    const r = parseRecord(LINE);
    expect(r.ts).toBe(1700000000062);
    expect(r.kind).toBe('person');
    expect(r.id).toBe('U00');
    expect(r.lat).toBeCloseTo(39.0458, 7);
    expect(r.lon).toBeCloseTo(-74.35, 7);
    expect(r.alt).toBe(1.0);
    expect(r.source).toBe('gps_lora');
    expect(r.quality).toBe(100);
    expect(r.replay).toBe(false);
  });

  it('parses the replay tag', () => {
    const r = parseRecord(`${LINE} replay=true`);
    expect(r.replay).toBe(true);
    expect(r.id).toBe('U00');
  });

  it('parses empty quality as null', () => {
    const r = parseRecord(LINE.replace('quality=100.000', 'quality='));
    expect(r.quality).toBeNull();
  });

  it('round-trips through format', () => {
    for (const line of [LINE, `${LINE} replay=true`]) {
      expect(formatRecord(parseRecord(line))).toBe(line);
    }
  });

  it('rejects wrong field order and bad values', () => {
    expect(() => parseRecord(LINE.replace('ts=', 'tz='))).toThrow(RecordParseError);
    expect(() => parseRecord('kind=person ' + LINE.replace(' kind=person', ''))).toThrow(
      RecordParseError,
    );
    expect(() => parseRecord(LINE.replace('kind=person', 'kind=drone'))).toThrow(RecordParseError);
    expect(() => parseRecord(LINE.replace('lat=39.0458000', 'lat=north'))).toThrow(RecordParseError);
    expect(() => parseRecord('')).toThrow(RecordParseError);
  });

  it('parses multi-line bodies and skips blanks', () => {
    const body = `${LINE}\n\n${LINE.replace('id=U00', 'id=U01')}\n`;
    const records = parseRecordLines(body);
    expect(records.map((r) => r.id)).toEqual(['U00', 'U01']);
  });
});
