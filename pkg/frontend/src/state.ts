// View-state reducer. Pure bookkeeping only: the reducer copies fields
// out of broadcast messages and trims history. It performs no physics
// and no classification; the led shown is exactly the led broadcast.

import type { ServerMsg, StateMsg, Led } from "./protocol.js";

export const HISTORY_WINDOW_S = 30;

export interface TracePoint {
  t_s: number;
  f_ext_hat_n: number;
  temp_c: number;
  resistance_ohm: number;
  theta_true_deg: number;
}

export interface ViewState {
  latest: StateMsg | null;
  led: Led | null;
  history: TracePoint[];
  connected: boolean;
  lastError: string | null;
}

export function initialViewState(): ViewState {
  return { latest: null, led: null, history: [], connected: false, lastError: null };
}

export function reduce(state: ViewState, msg: ServerMsg): ViewState {
  switch (msg.type) {
    case "state": {
      const point: TracePoint = {
        t_s: msg.t_s,
        f_ext_hat_n: msg.f_ext_hat_n,
        temp_c: msg.temp_c,
        resistance_ohm: msg.resistance_ohm,
        theta_true_deg: msg.theta_true_deg,
      };
      const cutoff = msg.t_s - HISTORY_WINDOW_S;
      const history = state.history.filter((p) => p.t_s >= cutoff && p.t_s <= msg.t_s);
      history.push(point);
      return { ...state, latest: msg, led: msg.led, history };
    }
    case "heartbeat":
      return state;
    case "ack":
      return state;
    case "error":
      return { ...state, lastError: msg.message };
  }
}

export function setConnected(state: ViewState, connected: boolean): ViewState {
  return { ...state, connected };
}
