// Wire protocol shared with the demo service: one JSON object per line
// (raw TCP) or per WebSocket text frame. The UI never invents fields;
// everything displayed originates in a StateMsg.

export type Led = "green" | "blue" | "red";

export interface StateMsg {
  type: "state";
  v: number;
  tick: number;
  t_s: number;
  theta_true_deg: number;
  theta_hat_deg: number;
  f_ext_hat_n: number;
  led: Led;
  temp_c: number;
  resistance_ohm: number;
  setpoint_deg: number;
  human_force_n: number;
}

export interface HeartbeatMsg {
  type: "heartbeat";
  v: number;
  tick: number;
}

export interface AckMsg {
  type: "ack";
  cmd: string;
}

export interface ErrorMsg {
  type: "error";
  message: string;
}

export type ServerMsg = StateMsg | HeartbeatMsg | AckMsg | ErrorMsg;

export type Command =
  | { type: "set_force"; force_n: number }
  | { type: "set_setpoint"; theta_deg: number }
  | { type: "reset" };

const LEDS = new Set(["green", "blue", "red"]);

const STATE_NUMBER_FIELDS = [
  "tick",
  "t_s",
  "theta_true_deg",
  "theta_hat_deg",
  "f_ext_hat_n",
  "temp_c",
  "resistance_ohm",
  "setpoint_deg",
  "human_force_n",
] as const;

/** Parse one line from the server; returns null for junk we don't know. */
export function parseServerLine(line: string): ServerMsg | null {
  let obj: unknown;
  try {
    obj = JSON.parse(line);
  } catch {
    return null;
  }
  if (typeof obj !== "object" || obj === null) return null;
  const m = obj as Record<string, unknown>;
  switch (m.type) {
    case "state": {
      for (const f of STATE_NUMBER_FIELDS) {
        if (typeof m[f] !== "number" || !isFinite(m[f] as number)) return null;
      }
      if (!LEDS.has(m.led as string)) return null;
      return m as unknown as StateMsg;
    }
    case "heartbeat":
      return typeof m.tick === "number" ? (m as unknown as HeartbeatMsg) : null;
    case "ack":
      return typeof m.cmd === "string" ? (m as unknown as AckMsg) : null;
    case "error":
      return typeof m.message === "string" ? (m as unknown as ErrorMsg) : null;
    default:
      return null;
  }
}

export function serializeCommand(cmd: Command): string {
  return JSON.stringify(cmd);
}
