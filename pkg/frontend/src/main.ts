/**
 * Browser entry point: wires the store, stream client, replay controls and
 * a canvas renderer together. All state logic lives in the imported
 * modules; this file only touches the DOM.
 */

import { ApiClient } from './api.js';
import { parseRecord, type AssetKind } from './records.js';
import { ReplayController } from './replay.js';
import { runStream } from './sse.js';
import { ConsoleStore } from './store.js';
import { fitViewport, renderList, KIND_GLYPHS, type Viewport } from './view.js';

const KIND_COLORS: Record<string, string> = {
  person: '#2d7ff9',
  support_equipment: '#f9a825',
  aircraft: '#d84343',
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

async function boot(): Promise<void> {
  const api = new ApiClient('');
  const store = new ConsoleStore();
  const replayCtl = new ReplayController(api, store);
  const canvas = el<HTMLCanvasElement>('map');
  const ctx = canvas.getContext('2d')!;
  const statusEl = el<HTMLSpanElement>('status');
  const scrubber = el<HTMLInputElement>('scrubber');
  let viewport: Viewport | null = null;

  const draw = (): void => {
    if (store.paused) return;
    const markers = store.visibleMarkers();
    if (!viewport && markers.length > 0) {
      viewport = fitViewport(markers, canvas.width, canvas.height);
    }
    if (!viewport) return;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    for (const sprite of renderList(store, viewport)) {
      ctx.strokeStyle = KIND_COLORS[sprite.marker.kind] + '66';
      ctx.beginPath();
      sprite.trail.forEach((p, i) => (i === 0 ? ctx.moveTo(p.x, p.y) : ctx.lineTo(p.x, p.y)));
      ctx.stroke();
      ctx.fillStyle = KIND_COLORS[sprite.marker.kind];
      ctx.beginPath();
      ctx.arc(sprite.at.x, sprite.at.y, 6, 0, 2 * Math.PI);
      ctx.fill();
      ctx.fillStyle = '#fff';
      ctx.font = '8px sans-serif';
      ctx.fillText(KIND_GLYPHS[sprite.marker.kind], sprite.at.x - 2.5, sprite.at.y + 3);
      ctx.fillStyle = '#333';
      ctx.font = '10px sans-serif';
      ctx.fillText(sprite.marker.id, sprite.at.x + 8, sprite.at.y + 3);
    }
    if (replayCtl.range && replayCtl.cursorTs !== null) {
      const span = replayCtl.range.toTs - replayCtl.range.fromTs || 1;
      scrubber.value = String((1000 * (replayCtl.cursorTs - replayCtl.range.fromTs)) / span);
      if (replayCtl.complete) statusEl.textContent = 'replay complete';
    }
    requestAnimationFrame(draw);
  };

  for (const kind of ['person', 'support_equipment', 'aircraft'] as AssetKind[]) {
    el<HTMLInputElement>(`filter-${kind}`).addEventListener('change', () => {
      const active = (['person', 'support_equipment', 'aircraft'] as AssetKind[]).filter(
        (k) => el<HTMLInputElement>(`filter-${k}`).checked,
      );
      store.setKindFilter(active.length === 3 ? null : active);
    });
  }

  el<HTMLButtonElement>('replay-start').addEventListener('click', () => {
    void (async () => {
      const fromTs = Number(el<HTMLInputElement>('replay-from').value);
      const toTs = Number(el<HTMLInputElement>('replay-to').value);
      const rate = Number(el<HTMLInputElement>('replay-rate').value) || 1;
      const result = await replayCtl.start({ fromTs, toTs }, rate);
      statusEl.textContent =
        result === 'conflict' ? 'replay already active (take over by waiting)' : `replay at ${rate}x`;
    })();
  });
  el<HTMLButtonElement>('replay-stop').addEventListener('click', () => {
    replayCtl.stop();
    statusEl.textContent = 'live';
  });
  scrubber.addEventListener('change', () => {
    if (!replayCtl.range) return;
    const span = replayCtl.range.toTs - replayCtl.range.fromTs;
    const cursor = replayCtl.range.fromTs + (span * Number(scrubber.value)) / 1000;
    void replayCtl.scrubTo(cursor);
  });

  const controller = new AbortController();
  window.addEventListener('beforeunload', () => controller.abort());
  requestAnimationFrame(draw);
  await runStream(api.streamUrl(), {
    onResync: async () => {
      store.resyncFromSnapshot(await api.assets());
    },
    onEvent: (data) => {
      try {
        const record = parseRecord(data);
        store.applyEvent(record);
        replayCtl.onEvent(record);
      } catch {
        // tolerate unknown lines from future servers
      }
    },
    onStateChange: (connected) => {
      statusEl.textContent = connected ? 'live' : 'reconnecting...';
      statusEl.className = connected ? 'ok' : 'warn';
    },
  }, controller.signal);
}

void boot();
