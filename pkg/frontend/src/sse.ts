/**
 * Server-sent-events consumption over fetch streams.
 *
 * Hand-rolled instead of relying on a browser EventSource so the same code
 * runs headless under Node for tests; the parser is incremental and
 * tolerates arbitrary chunk boundaries, and the client auto-reconnects
 * with a resync hook so no committed state is ever lost to a gap.
 */

export class SseParser {
  private buffer = '';

  /** Feed one chunk; returns the data payloads of any completed events. */
  push(chunk: string): string[] {
    this.buffer += chunk;
    const events: string[] = [];
    let sep: number;
    while ((sep = this.buffer.indexOf('\n\n')) >= 0) {
      const block = this.buffer.slice(0, sep);
      this.buffer = this.buffer.slice(sep + 2);
      const dataLines = block
        .split('\n')
        .filter((line) => line.startsWith('data:'))
        .map((line) => line.slice(5).replace(/^ /, ''));
      if (dataLines.length > 0) {
        events.push(dataLines.join('\n')); // comments / heartbeats carry no data
      }
    }
    return events;
  }
}

export interface StreamClientOptions {
  /** called before (re)connecting so the caller can resync from /assets */
  onResync?: () => Promise<void>;
  onEvent: (data: string) => void;
  /** connection state changes drive the reconnect indicator */
  onStateChange?: (connected: boolean) => void;
  reconnectDelayMs?: number;
  fetchImpl?: typeof fetch;
}

/**
 * Consume an event stream until aborted. Each (re)connection first runs the
 * resync hook, then applies stream events, so a refresh or hiccup converges
 * back to the server's state.
 */
export async function runStream(url: string, options: StreamClientOptions, signal: AbortSignal): Promise<void> {
  const fetchImpl = options.fetchImpl ?? fetch;
  const delay = options.reconnectDelayMs ?? 1000;
  while (!signal.aborted) {
    try {
      if (options.onResync) {
        await options.onResync();
      }
      const response = await fetchImpl(url, { signal, headers: { Accept: 'text/event-stream' } });
      if (!response.ok || !response.body) {
        throw new Error(`stream request failed: ${response.status}`);
      }
      options.onStateChange?.(true);
      const parser = new SseParser();
      const reader = response.body.getReader();
      const decoder = new TextDecoder();
      for (;;) {
        const { done, value } = await reader.read();
        if (done) break;
        for (const data of parser.push(decoder.decode(value, { stream: true }))) {
          options.onEvent(data);
        }
      }
    } catch (err) {
      if (signal.aborted) break;
    }
    options.onStateChange?.(false);
    if (signal.aborted) break;
    await new Promise((resolve) => setTimeout(resolve, delay));
  }
}
