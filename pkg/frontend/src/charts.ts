// Rolling strip charts of the broadcast history. Linear interpolation
// only (straight polyline through the points the server sent).

import type { TracePoint } from "./state.js";

export interface ChannelSpec {
  field: keyof Omit<TracePoint, "t_s">;
  label: string;
  color: string;
  min?: number;
  max?: number;
}

export const CHANNELS: ChannelSpec[] = [
  { field: "f_ext_hat_n", label: "F_ext est [N]", color: "#d62728", min: -0.2, max: 1.2 },
  { field: "temp_c", label: "T [degC]", color: "#ff7f0e", min: 20, max: 140 },
  { field: "resistance_ohm", label: "R [ohm]", color: "#2ca02c", min: 1.4, max: 3.6 },
  { field: "theta_true_deg", label: "theta [deg]", color: "#1f77b4", min: 0, max: 70 },
];

export function drawStripChart(
  ctx: CanvasRenderingContext2D,
  width: number,
  height: number,
  history: TracePoint[],
  spec: ChannelSpec,
  windowS: number,
): void {
  ctx.clearRect(0, 0, width, height);
  ctx.strokeStyle = "#ddd";
  ctx.strokeRect(0.5, 0.5, width - 1, height - 1);
  ctx.fillStyle = "#666";
  ctx.font = "10px sans-serif";
  ctx.fillText(spec.label, 6, 12);
  if (history.length < 2) return;

  const tEnd = history[history.length - 1].t_s;
  const tStart = tEnd - windowS;
  const values = history.map((p) => p[spec.field]);
  const lo = spec.min ?? Math.min(...values);
  const hi = spec.max ?? Math.max(...values);
  const span = hi - lo || 1;

  ctx.beginPath();
  let started = false;
  for (const p of history) {
    if (p.t_s < tStart) continue;
    const x = ((p.t_s - tStart) / windowS) * width;
    const y = height - ((p[spec.field] - lo) / span) * (height - 16) - 4;
    if (!started) {
      ctx.moveTo(x, y);
      started = true;
    } else {
      ctx.lineTo(x, y);
    }
  }
  ctx.strokeStyle = spec.color;
  ctx.lineWidth = 1.5;
  ctx.stroke();
}
