// Socket transport. The browser build uses a WebSocket to the service
// (same port as the raw TCP protocol; the server sniffs the HTTP
// handshake). Parsed messages flow through a bounded intake queue so a
// slow render can never block message handling: the queue drops the
// oldest state frames first.

import { parseServerLine, serializeCommand, type Command, type ServerMsg } from "./protocol.js";

export interface Transport {
  send(cmd: Command): void;
  close(): void;
}

export interface TransportEvents {
  onMessage: (msg: ServerMsg) => void;
  onStatus: (connected: boolean) => void;
}

const INTAKE_LIMIT = 600;

export class BoundedIntake {
  private queue: ServerMsg[] = [];

  constructor(private limit = INTAKE_LIMIT) {}

  push(msg: ServerMsg): void {
    this.queue.push(msg);
    while (this.queue.length > this.limit) this.queue.shift();
  }

  drain(): ServerMsg[] {
    const out = this.queue;
    this.queue = [];
    return out;
  }

  get size(): number {
    return this.queue.length;
  }
}

export function connectWebSocket(address: string, events: TransportEvents): Transport {
  const url = address.startsWith("ws") ? address : `ws://${address}/`;
  const ws = new WebSocket(url);
  ws.onopen = () => events.onStatus(true);
  ws.onclose = () => events.onStatus(false);
  ws.onerror = () => events.onStatus(false);
  ws.onmessage = (ev) => {
    const msg = parseServerLine(String(ev.data));
    if (msg !== null) events.onMessage(msg);
  };
  return {
    send(cmd: Command) {
      if (ws.readyState === WebSocket.OPEN) ws.send(serializeCommand(cmd));
    },
    close() {
      ws.close();
    },
  };
}
