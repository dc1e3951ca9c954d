// Limb rendering: a constant-curvature arc of fixed arc length whose
// total subtended angle is twice the bend angle, so the lateral tip
// offset is L*sin^2(theta)/theta — the same geometry the service uses.

export const LIMB_LENGTH_MM = 105;

export interface Point {
  x: number;
  y: number;
}

/** Points along the arc in limb coordinates (x along the base tangent, mm). */
export function arcPoints(thetaRad: number, lengthMm: number, n = 40): Point[] {
  const pts: Point[] = [];
  if (thetaRad < 1e-9) {
    for (let i = 0; i <= n; i++) pts.push({ x: (lengthMm * i) / n, y: 0 });
    return pts;
  }
  const radius = lengthMm / (2 * thetaRad); // arc length L over included angle 2*theta
  for (let i = 0; i <= n; i++) {
    const a = (2 * thetaRad * i) / n;
    pts.push({ x: radius * Math.sin(a), y: radius * (1 - Math.cos(a)) });
  }
  return pts;
}

/** Lateral tip offset of the arc, mm; matches L*sin^2(theta)/theta. */
export function tipOffset(thetaRad: number, lengthMm: number): number {
  if (thetaRad === 0) return 0;
  return (lengthMm * Math.sin(thetaRad) ** 2) / thetaRad;
}

export function drawLimb(
  ctx: CanvasRenderingContext2D,
  width: number,
  height: number,
  thetaTrueDeg: number,
  thetaHatDeg: number,
  pushN: number,
): void {
  ctx.clearRect(0, 0, width, height);
  const scale = (0.8 * Math.min(width, height)) / LIMB_LENGTH_MM;
  const ox = 0.1 * width;
  const oy = 0.8 * height;

  const paint = (thetaDeg: number, color: string, lineWidth: number) => {
    const pts = arcPoints((thetaDeg * Math.PI) / 180, LIMB_LENGTH_MM);
    ctx.beginPath();
    pts.forEach((p, i) => {
      const x = ox + p.x * scale;
      const y = oy - p.y * scale;
      if (i === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    });
    ctx.strokeStyle = color;
    ctx.lineWidth = lineWidth;
    ctx.lineCap = "round";
    ctx.stroke();
  };

  // base mount
  ctx.fillStyle = "#555";
  ctx.fillRect(ox - 10, oy - 6, 10, 12);
  paint(thetaHatDeg, "#9ecae1", 3); // estimate, behind
  paint(thetaTrueDeg, "#2b5876", 6);

  if (pushN > 0) {
    const tip = arcPoints((thetaTrueDeg * Math.PI) / 180, LIMB_LENGTH_MM).pop()!;
    const x = ox + tip.x * scale;
    const y = oy - tip.y * scale;
    ctx.beginPath();
    ctx.moveTo(x, y - 30);
    ctx.lineTo(x, y - 8);
    ctx.strokeStyle = "#d62728";
    ctx.lineWidth = 3;
    ctx.stroke();
    ctx.beginPath();
    ctx.moveTo(x - 5, y - 14);
    ctx.lineTo(x, y - 6);
    ctx.lineTo(x + 5, y - 14);
    ctx.fillStyle = "#d62728";
    ctx.fill();
  }
}
