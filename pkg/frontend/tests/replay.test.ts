import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import type { TrackRecord } from '../src/records.js';
import { ReplayController } from '../src/replay.js';
import { ConsoleStore } from '../src/store.js';

function fakeApi(responses: { replayStatus?: number } = {}): ApiClient {
  const fetchImpl = (async (url: RequestInfo | URL, init?: RequestInit) => {
    const path = String(url);
    if (path.endsWith('/replay') && init?.method === 'POST') {
      const status = responses.replayStatus ?? 200;
      return new Response(status === 200 ? 'replay=started\n' : 'error=replay_active\n', { status });
    }
    return new Response('', { status: 200 });
  }) as typeof fetch;
  return new ApiClient('http://svc', fetchImpl);
}

function replayEvent(ts: number): TrackRecord {
  return {
    ts,
    kind: 'person',
    id: 'P1',
    lat: 39,
    lon: -74,
    alt: 0,
    source: 'gps_lora',
    quality: null,
    replay: true,
  };
}

describe('ReplayController', () => {
  it('starts a session and tracks the cursor to completion', async () => {
    let clock = 0;
    const store = new ConsoleStore();
    const ctl = new ReplayController(fakeApi(), store, () => clock);
    expect(await ctl.start({ fromTs: 1000, toTs: 3000 }, 2.0)).toBe('started');
    expect(store.mode).toBe('replay');
    expect(ctl.cursorTs).toBe(1000);
    expect(ctl.complete).toBe(false);

    clock = 500;
    ctl.onEvent(replayEvent(2000));
    expect(ctl.cursorTs).toBe(2000);
    expect(ctl.complete).toBe(false);

    clock = 1000;
    ctl.onEvent(replayEvent(3000));
    expect(ctl.complete).toBe(true);
    expect(ctl.elapsedMs()).toBe(1000);
  });

  it('ignores live events', async () => {
    const ctl = new ReplayController(fakeApi(), new ConsoleStore());
    await ctl.start({ fromTs: 0, toTs: 10 }, 1.0);
    ctl.onEvent({ ...replayEvent(5), replay: false });
    expect(ctl.cursorTs).toBe(0);
    expect(ctl.eventsSeen).toBe(0);
  });

  it('reports conflicts without switching mode', async () => {
    const store = new ConsoleStore();
    const ctl = new ReplayController(fakeApi({ replayStatus: 409 }), store);
    expect(await ctl.start({ fromTs: 0, toTs: 10 }, 1.0)).toBe('conflict');
    expect(store.mode).toBe('live');
  });

  it('scrubbing restarts at the clamped cursor', async () => {
    const posted: string[] = [];
    const fetchImpl = (async (_url: RequestInfo | URL, init?: RequestInit) => {
      if (init?.method === 'POST') posted.push(String(init.body));
      return new Response('replay=started\n', { status: 200 });
    }) as typeof fetch;
    const ctl = new ReplayController(new ApiClient('http://svc', fetchImpl), new ConsoleStore());
    await ctl.start({ fromTs: 1000, toTs: 5000 }, 2.0);
    await ctl.scrubTo(3000);
    await ctl.scrubTo(99999); // clamps to range end
    expect(posted).toEqual([
      'from=1000 to=5000 rate=2',
      'from=3000 to=5000 rate=2',
      'from=5000 to=5000 rate=2',
    ]);
  });

  it('rate 0 pauses client-side without a server call', async () => {
    const store = new ConsoleStore();
    const ctl = new ReplayController(fakeApi({ replayStatus: 500 }), store); // server would fail
    await ctl.start({ fromTs: 0, toTs: 10 }, 0);
    expect(store.paused).toBe(true);
    ctl.stop();
    expect(store.paused).toBe(false);
    expect(store.mode).toBe('live');
  });
});
