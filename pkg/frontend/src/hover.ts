// Hover cross-linking: one pane's hover coordinate becomes annotations in
// the others, as computed by the server's hover endpoint.

import type { PaneScales } from "./panes";

export interface HoverAnnotations {
  nyquist_circle?: { radius: number };
  nyquist_ray?: { angle_deg: number };
  bode_mag_line?: { mag_db: number };
  bode_phase_line?: { phase_deg: number };
  snapped?: boolean;
  system_id?: string;
  t?: number;
  y?: number;
}

export function drawNyquistCircle(
  ctx: CanvasRenderingContext2D,
  scales: PaneScales,
  radius: number,
) {
  const cx = scales.x.toPixel(0);
  const cy = scales.y.toPixel(0);
  const rpx = Math.abs(scales.x.toPixel(radius) - cx);
  ctx.strokeStyle = "rgba(60,60,60,0.7)";
  ctx.setLineDash([4, 3]);
  ctx.beginPath();
  ctx.arc(cx, cy, rpx, 0, 2 * Math.PI);
  ctx.stroke();
  ctx.setLineDash([]);
}

export function drawNyquistRay(
  ctx: CanvasRenderingContext2D,
  scales: PaneScales,
  angleDeg: number,
  length = 1e3,
) {
  const rad = (angleDeg * Math.PI) / 180;
  ctx.strokeStyle = "rgba(60,60,60,0.7)";
  ctx.setLineDash([4, 3]);
  ctx.beginPath();
  ctx.moveTo(scales.x.toPixel(0), scales.y.toPixel(0));
  ctx.lineTo(
    scales.x.toPixel(length * Math.cos(rad)),
    scales.y.toPixel(length * Math.sin(rad)),
  );
  ctx.stroke();
  ctx.setLineDash([]);
}

export function drawHorizontalLine(
  ctx: CanvasRenderingContext2D,
  scales: PaneScales,
  value: number,
  x0px: number,
  x1px: number,
) {
  const py = scales.y.toPixel(value);
  ctx.strokeStyle = "rgba(60,60,60,0.7)";
  ctx.setLineDash([4, 3]);
  ctx.beginPath();
  ctx.moveTo(x0px, py);
  ctx.lineTo(x1px, py);
  ctx.stroke();
  ctx.setLineDash([]);
}

export function drawVerticalLine(
  ctx: CanvasRenderingContext2D,
  scales: PaneScales,
  value: number,
  y0px: number,
  y1px: number,
) {
  const px = scales.x.toPixel(value);
  ctx.strokeStyle = "rgba(60,60,60,0.7)";
  ctx.setLineDash([4, 3]);
  ctx.beginPath();
  ctx.moveTo(px, y0px);
  ctx.lineTo(px, y1px);
  ctx.stroke();
  ctx.setLineDash([]);
}

export function drawSnapDot(
  ctx: CanvasRenderingContext2D,
  scales: PaneScales,
  t: number,
  y: number,
) {
  ctx.fillStyle = "#222";
  ctx.beginPath();
  ctx.arc(scales.x.toPixel(t), scales.y.toPixel(y), 4, 0, 2 * Math.PI);
  ctx.fill();
}
