// Axis scales: map data coordinates to pixels and back.

export interface Scale {
  toPixel(value: number): number;
  fromPixel(px: number): number;
}

export class LinearScale implements Scale {
  constructor(
    private d0: number,
    private d1: number,
    private p0: number,
    private p1: number,
  ) {}

  toPixel(value: number): number {
    return this.p0 + ((value - this.d0) / (this.d1 - this.d0)) * (this.p1 - this.p0);
  }

  fromPixel(px: number): number {
    return this.d0 + ((px - this.p0) / (this.p1 - this.p0)) * (this.d1 - this.d0);
  }
}

export class LogScale implements Scale {
  private l0: number;
  private l1: number;

  constructor(
    d0: number,
    d1: number,
    private p0: number,
    private p1: number,
  ) {
    if (d0 <= 0 || d1 <= 0) throw new Error("log scale needs positive bounds");
    this.l0 = Math.log10(d0);
    this.l1 = Math.log10(d1);
  }

  toPixel(value: number): number {
    const l = Math.log10(value);
    return this.p0 + ((l - this.l0) / (this.l1 - this.l0)) * (this.p1 - this.p0);
  }

  fromPixel(px: number): number {
    const l = this.l0 + ((px - this.p0) / (this.p1 - this.p0)) * (this.l1 - this.l0);
    return 10 ** l;
  }
}

// Data range covering every finite sample of every series, with padding.
export function dataRange(
  seriesList: (number | null)[][],
  padFraction = 0.05,
): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const series of seriesList) {
    for (const v of series) {
      if (v === null || !Number.isFinite(v)) continue;
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  if (lo === Infinity) return [0, 1];
  if (lo === hi) return [lo - 0.5, hi + 0.5];
  const pad = (hi - lo) * padFraction;
  return [lo - pad, hi + pad];
}
