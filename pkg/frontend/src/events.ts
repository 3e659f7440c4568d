import type { ServiceEvent } from './types.js';

export type EventListener = (event: ServiceEvent) => void;
export type ConnectionListener = (connected: boolean) => void;

/** Decode a base64 spectrogram column into its 1024 byte values. */
export function decodeColumn(valuesB64: string): Uint8Array {
  const raw = atob(valuesB64);
  const values = new Uint8Array(raw.length);
  for (let i = 0; i < raw.length; i++) {
    values[i] = raw.charCodeAt(i);
  }
  return values;
}

/**
 * Single consumer of the service's /ws/events stream.
 *
 * Reconnects with a fixed backoff and reports connection state so the
 * shell can show a banner; display buffers survive the reconnect
 * because consumers keep their own state.
 */
export class EventStream {
  private socket: WebSocket | null = null;
  private listeners: EventListener[] = [];
  private connectionListeners: ConnectionListener[] = [];
  private closed = false;
  private retryTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private url: string,
    private retryMs = 1000,
  ) {}

  onEvent(listener: EventListener): void {
    this.listeners.push(listener);
  }

  onConnection(listener: ConnectionListener): void {
    this.connectionListeners.push(listener);
  }

  connect(): void {
    this.closed = false;
    this.open();
  }

  close(): void {
    this.closed = true;
    if (this.retryTimer !== null) clearTimeout(this.retryTimer);
    this.socket?.close();
  }

  /** Dispatch one already-parsed event; the socket handler calls this. */
  dispatch(event: ServiceEvent): void {
    for (const listener of this.listeners) listener(event);
  }

  private open(): void {
    const socket = new WebSocket(this.url);
    this.socket = socket;

    socket.onopen = () => {
      for (const listener of this.connectionListeners) listener(true);
    };

    socket.onmessage = (message: MessageEvent) => {
      this.dispatch(JSON.parse(String(message.data)) as ServiceEvent);
    };

    socket.onclose = () => {
      for (const listener of this.connectionListeners) listener(false);
      if (!this.closed) {
        this.retryTimer = setTimeout(() => this.open(), this.retryMs);
      }
    };

    socket.onerror = () => {
      socket.close();
    };
  }
}
