import { describe, expect, it } from "vitest";

import type { StateMsg } from "../src/protocol.js";
import { HISTORY_WINDOW_S, initialViewState, reduce, setConnected } from "../src/state.js";

function stateMsg(tick: number, overrides: Partial<StateMsg> = {}): StateMsg {
  return {
    type: "state", v: 1, tick, t_s: tick * 0.1,
    theta_true_deg: 25, theta_hat_deg: 24, f_ext_hat_n: 0.01, led: "green",
    temp_c: 88, resistance_ohm: 1.9, setpoint_deg: 25, human_force_n: 0,
    ...overrides,
  };
}

describe("view-state reducer", () => {
  it("copies the broadcast led verbatim", () => {
    let v = initialViewState();
    for (const led of ["green", "blue", "red"] as const) {
      v = reduce(v, stateMsg(1, { led, f_ext_hat_n: 99 }));
      expect(v.led).toBe(led); // regardless of any force value
    }
  });

  it("keeps at most the trailing window of history", () => {
    let v = initialViewState();
    for (let tick = 0; tick < 600; tick++) {
      v = reduce(v, stateMsg(tick));
    }
    expect(v.history.length).toBeLessThanOrEqual(HISTORY_WINDOW_S * 10 + 1);
    const first = v.history[0].t_s;
    const last = v.history[v.history.length - 1].t_s;
    expect(last - first).toBeLessThanOrEqual(HISTORY_WINDOW_S);
    expect(last).toBeCloseTo(59.9, 5);
  });

  it("drops stale points when time restarts (reset)", () => {
    let v = initialViewState();
    v = reduce(v, stateMsg(500));
    v = reduce(v, stateMsg(0));
    expect(v.history.length).toBe(1);
  });

  it("records errors and ignores heartbeats", () => {
    let v = initialViewState();
    v = reduce(v, { type: "heartbeat", v: 1, tick: 10 });
    expect(v.latest).toBeNull();
    v = reduce(v, { type: "error", message: "bad force" });
    expect(v.lastError).toBe("bad force");
  });

  it("tracks connection status separately", () => {
    let v = initialViewState();
    v = setConnected(v, true);
    expect(v.connected).toBe(true);
  });
});
