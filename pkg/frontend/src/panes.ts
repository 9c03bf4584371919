// The five linked plot panes. Each pane draws directly from the latest
// API payloads in the series store; no numbers are derived locally beyond
// coordinate mapping.

import { LinearScale, LogScale, Scale, dataRange } from "./scales";
import type {
  BodePayload,
  NyquistPayload,
  PaneKind,
  PzmapPayload,
  StepPayload,
} from "./types";

export const PALETTE = [
  "#e6194b",
  "#3cb44b",
  "#d2a400",
  "#4363d8",
  "#f58231",
  "#911eb4",
  "#46f0f0",
  "#f032e6",
  "#7f8c00",
  "#008080",
];

export function colorFor(index: number): string {
  return PALETTE[index % PALETTE.length];
}

export interface SeriesStore {
  bode: Map<string, BodePayload>;
  nyquist: Map<string, NyquistPayload>;
  step: Map<string, StepPayload>;
  pzmap: Map<string, PzmapPayload>;
  colors: Map<string, number>;
}

export function emptyStore(): SeriesStore {
  return {
    bode: new Map(),
    nyquist: new Map(),
    step: new Map(),
    pzmap: new Map(),
    colors: new Map(),
  };
}

const MARGIN = { left: 46, right: 10, top: 8, bottom: 22 };

export interface PaneScales {
  x: Scale;
  y: Scale;
}

export class PlotPane {
  readonly kind: PaneKind;
  readonly canvas: HTMLCanvasElement;
  scales: PaneScales | null = null;
  lastSeriesCount = 0;

  constructor(kind: PaneKind, canvas: HTMLCanvasElement) {
    this.kind = kind;
    this.canvas = canvas;
  }

  private plotRect() {
    return {
      x0: MARGIN.left,
      x1: this.canvas.width - MARGIN.right,
      y0: this.canvas.height - MARGIN.bottom,
      y1: MARGIN.top,
    };
  }

  buildScales(store: SeriesStore): PaneScales {
    const r = this.plotRect();
    if (this.kind === "bode_mag" || this.kind === "bode_phase") {
      const payloads = [...store.bode.values()];
      const omegas = payloads.map((p) => p.omega);
      const lo = Math.min(1e-2, ...omegas.map((w) => w[0] ?? 1e-2));
      const hi = Math.max(1e3, ...omegas.map((w) => w[w.length - 1] ?? 1e3));
      const ys = payloads.map((p) =>
        this.kind === "bode_mag" ? p.mag_db : p.phase_deg,
      );
      const [ylo, yhi] = dataRange(ys.length ? ys : [[-40, 20]]);
      return {
        x: new LogScale(lo, hi, r.x0, r.x1),
        y: new LinearScale(ylo, yhi, r.y0, r.y1),
      };
    }
    if (this.kind === "step") {
      const payloads = [...store.step.values()];
      const [tlo, thi] = dataRange(payloads.map((p) => p.t), 0);
      const [ylo, yhi] = dataRange(payloads.map((p) => p.y));
      return {
        x: new LinearScale(tlo, thi || 1, r.x0, r.x1),
        y: new LinearScale(ylo, yhi, r.y0, r.y1),
      };
    }
    if (this.kind === "nyquist") {
      const payloads = [...store.nyquist.values()];
      const [xlo, xhi] = dataRange([...payloads.map((p) => p.re), [-1.2, 1.2]]);
      const [ylo, yhi] = dataRange([...payloads.map((p) => p.im), [-1.2, 1.2]]);
      // equal axis scaling: widen the shorter span
      const span = Math.max(xhi - xlo, yhi - ylo);
      const xc = (xlo + xhi) / 2;
      const yc = (ylo + yhi) / 2;
      const pixelSpan = Math.min(r.x1 - r.x0, r.y0 - r.y1);
      return {
        x: new LinearScale(xc - span / 2, xc + span / 2, r.x0, r.x0 + pixelSpan),
        y: new LinearScale(yc - span / 2, yc + span / 2, r.y0, r.y0 - pixelSpan),
      };
    }
    // pzmap
    const payloads = [...store.pzmap.values()];
    const res = payloads.map((p) => [...p.poles, ...p.zeros].map((q) => q.re));
    const ims = payloads.map((p) => [...p.poles, ...p.zeros].map((q) => q.im));
    const [xlo, xhi] = dataRange([...res, [-2, 0.5]], 0.15);
    const [ylo, yhi] = dataRange([...ims, [-1.5, 1.5]], 0.15);
    return {
      x: new LinearScale(xlo, xhi, r.x0, r.x1),
      y: new LinearScale(ylo, yhi, r.y0, r.y1),
    };
  }

  render(store: SeriesStore): number {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return 0;
    this.scales = this.buildScales(store);
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);
    this.drawFrame(ctx);
    let drawn = 0;
    if (this.kind === "bode_mag" || this.kind === "bode_phase") {
      for (const [sid, payload] of store.bode) {
        const ys = this.kind === "bode_mag" ? payload.mag_db : payload.phase_deg;
        this.strokeSeries(ctx, payload.omega, ys, this.color(store, sid));
        drawn += 1;
      }
    } else if (this.kind === "step") {
      for (const [sid, payload] of store.step) {
        this.strokeSeries(ctx, payload.t, payload.y, this.color(store, sid));
        drawn += 1;
      }
    } else if (this.kind === "nyquist") {
      for (const [sid, payload] of store.nyquist) {
        this.strokeSeries(ctx, payload.re, payload.im, this.color(store, sid));
        drawn += 1;
      }
      this.drawCriticalPoint(ctx);
    } else {
      for (const [sid, payload] of store.pzmap) {
        this.drawMarkers(ctx, payload, this.color(store, sid));
        drawn += 1;
      }
    }
    this.lastSeriesCount = drawn;
    return drawn;
  }

  private color(store: SeriesStore, sid: string): string {
    return colorFor(store.colors.get(sid) ?? 0);
  }

  private drawFrame(ctx: CanvasRenderingContext2D) {
    const r = this.plotRect();
    ctx.strokeStyle = "#888";
    ctx.lineWidth = 1;
    ctx.strokeRect(r.x0, r.y1, r.x1 - r.x0, r.y0 - r.y1);
  }

  private strokeSeries(
    ctx: CanvasRenderingContext2D,
    xs: number[],
    ys: (number | null)[],
    color: string,
  ) {
    const s = this.scales!;
    ctx.strokeStyle = color;
    ctx.lineWidth = 2;
    ctx.beginPath();
    let pen = false;
    for (let i = 0; i < xs.length; i++) {
      const y = ys[i];
      if (y === null || !Number.isFinite(y)) {
        pen = false;
        continue;
      }
      const px = s.x.toPixel(xs[i]);
      const py = s.y.toPixel(y);
      if (!pen) {
        ctx.moveTo(px, py);
        pen = true;
      } else {
        ctx.lineTo(px, py);
      }
    }
    ctx.stroke();
  }

  private drawCriticalPoint(ctx: CanvasRenderingContext2D) {
    const s = this.scales!;
    const px = s.x.toPixel(-1);
    const py = s.y.toPixel(0);
    ctx.strokeStyle = "#c00";
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.moveTo(px - 5, py - 5);
    ctx.lineTo(px + 5, py + 5);
    ctx.moveTo(px - 5, py + 5);
    ctx.lineTo(px + 5, py - 5);
    ctx.stroke();
  }

  private drawMarkers(
    ctx: CanvasRenderingContext2D,
    payload: PzmapPayload,
    color: string,
  ) {
    const s = this.scales!;
    ctx.strokeStyle = color;
    ctx.lineWidth = 2;
    for (const p of payload.poles) {
      const px = s.x.toPixel(p.re);
      const py = s.y.toPixel(p.im);
      ctx.beginPath();
      ctx.moveTo(px - 5, py - 5);
      ctx.lineTo(px + 5, py + 5);
      ctx.moveTo(px - 5, py + 5);
      ctx.lineTo(px + 5, py - 5);
      ctx.stroke();
    }
    for (const z of payload.zeros) {
      const px = s.x.toPixel(z.re);
      const py = s.y.toPixel(z.im);
      ctx.beginPath();
      ctx.arc(px, py, 5, 0, 2 * Math.PI);
      ctx.stroke();
    }
  }
}

export function formatMargins(m: {
  gain_margin: number | null;
  omega_pc: number | null;
  phase_margin_deg: number | null;
  omega_gc: number | null;
}): string {
  const gm =
    m.gain_margin === null
      ? "gain margin: infinite"
      : `gain margin: ${m.gain_margin.toFixed(3)} at ${m.omega_pc!.toFixed(3)} rad/s`;
  const pm =
    m.phase_margin_deg === null
      ? "phase margin: none"
      : `phase margin: ${m.phase_margin_deg.toFixed(1)} deg at ${m.omega_gc!.toFixed(3)} rad/s`;
  return `${gm} | ${pm}`;
}
