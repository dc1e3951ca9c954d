// Page wiring: connect to the service named by ?server=host:port,
// funnel broadcasts through the reducer, render on animation frames,
// and map the two sliders to commands. Holding the force slider pushes
// on the limb; releasing it snaps back to 0 N (finger off).

import { CHANNELS, drawStripChart } from "./charts.js";
import { drawLimb } from "./render.js";
import { HISTORY_WINDOW_S, initialViewState, reduce, setConnected } from "./state.js";
import { BoundedIntake, connectWebSocket } from "./transport.js";

const params = new URLSearchParams(window.location.search);
const server = params.get("server") ?? "127.0.0.1:8090";

const $ = (id: string) => document.getElementById(id)!;
const limbCanvas = $("limb") as HTMLCanvasElement;
const chartCanvases = CHANNELS.map((c) => {
  const el = document.createElement("canvas");
  el.width = 560;
  el.height = 90;
  $("charts").appendChild(el);
  return el;
});

let view = initialViewState();
const intake = new BoundedIntake();

const transport = connectWebSocket(server, {
  onMessage: (msg) => intake.push(msg),
  onStatus: (connected) => {
    view = setConnected(view, connected);
    banner();
  },
});

function banner(): void {
  const el = $("status");
  el.textContent = view.connected ? `connected to ${server}` : `disconnected from ${server}`;
  el.className = view.connected ? "ok" : "bad";
  (forceSlider as HTMLInputElement).disabled = !view.connected;
  (setpointSlider as HTMLInputElement).disabled = !view.connected;
}

// -- controls

const forceSlider = $("force") as HTMLInputElement;
const forceLabel = $("force-label");
const setpointSlider = $("setpoint") as HTMLInputElement;
const setpointLabel = $("setpoint-label");

function sendForce(n: number): void {
  transport.send({ type: "set_force", force_n: n });
  forceLabel.textContent = `${n.toFixed(2)} N`;
}

forceSlider.addEventListener("input", () => sendForce(Number(forceSlider.value)));
for (const ev of ["pointerup", "pointercancel", "mouseleave", "touchend"]) {
  forceSlider.addEventListener(ev, () => {
    forceSlider.value = "0";
    sendForce(0);
  });
}

setpointSlider.addEventListener("change", () => {
  const deg = Number(setpointSlider.value);
  transport.send({ type: "set_setpoint", theta_deg: deg });
  setpointLabel.textContent = `${deg.toFixed(0)} deg`;
});

$("reset").addEventListener("click", () => transport.send({ type: "reset" }));

// -- render loop (decoupled from intake; drains the queue each frame)

function frame(): void {
  for (const msg of intake.drain()) view = reduce(view, msg);
  const s = view.latest;
  if (s !== null) {
    const led = $("led");
    led.className = `led ${view.led}`;
    $("led-label").textContent = view.led ?? "";
    $("readout").textContent =
      `tick ${s.tick}   F_ext est ${s.f_ext_hat_n.toFixed(3)} N   ` +
      `T ${s.temp_c.toFixed(1)} C   R ${s.resistance_ohm.toFixed(3)} ohm   ` +
      `pose ${s.theta_true_deg.toFixed(1)} deg (est ${s.theta_hat_deg.toFixed(1)})`;
    const ctx = limbCanvas.getContext("2d")!;
    drawLimb(ctx, limbCanvas.width, limbCanvas.height, s.theta_true_deg, s.theta_hat_deg,
             s.human_force_n);
    for (let i = 0; i < CHANNELS.length; i++) {
      const c = chartCanvases[i].getContext("2d")!;
      drawStripChart(c, chartCanvases[i].width, chartCanvases[i].height, view.history,
                     CHANNELS[i], HISTORY_WINDOW_S);
    }
  }
  requestAnimationFrame(frame);
}

banner();
requestAnimationFrame(frame);
