// Slider position <-> parameter value mapping. Sliders run 0..1000;
// log-scaled parameters (time constants, natural frequency) map through
// log10 so a decade takes the same travel everywhere.

import type { ParamSpecPayload } from "./types";

export const SLIDER_STEPS = 1000;

export function toSlider(value: number, spec: ParamSpecPayload): number {
  let fraction: number;
  if (spec.scale === "log") {
    const lo = Math.log10(spec.min);
    const hi = Math.log10(spec.max);
    fraction = (Math.log10(Math.max(value, spec.min)) - lo) / (hi - lo);
  } else {
    fraction = (value - spec.min) / (spec.max - spec.min);
  }
  return Math.round(Math.min(1, Math.max(0, fraction)) * SLIDER_STEPS);
}

export function fromSlider(position: number, spec: ParamSpecPayload): number {
  const fraction = Math.min(1, Math.max(0, position / SLIDER_STEPS));
  if (spec.scale === "log") {
    const lo = Math.log10(spec.min);
    const hi = Math.log10(spec.max);
    return 10 ** (lo + fraction * (hi - lo));
  }
  return spec.min + fraction * (spec.max - spec.min);
}

export function formatParam(value: number): string {
  if (!Number.isFinite(value)) return String(value);
  return String(Number(value.toPrecision(6)));
}
