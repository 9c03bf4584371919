// Drag state, drag-to-parameter mappings, and request coalescing.
//
// The mappings translate a drag in data coordinates into one parameter
// update; everything is recomputed server-side, so these only need to be
// reasonable inversions of what the plots show. Disabled combinations
// (e.g. any Bode drag on the delayed system) return null.

export type DragHandle = "pole" | "step_curve" | "bode_mag_curve" | "bode_cross";

export interface DragState {
  systemId: string;
  handle: DragHandle;
  templateId: string | null;
  poleIndex: number;
  start: { x: number; y: number };
  startParams: Record<string, number>;
}

export interface HoverState {
  pane: string;
  x: number;
  y: number;
}

export interface InteractionState {
  hover: HoverState | null;
  drag: DragState | null; // at most one active drag
  questionMode: boolean;
}

export function initialInteractionState(): InteractionState {
  return { hover: null, drag: null, questionMode: false };
}

export function beginDrag(state: InteractionState, drag: DragState): InteractionState {
  if (state.drag) return state; // a drag is already active
  return { ...state, drag };
}

export function endDrag(state: InteractionState): InteractionState {
  return { ...state, drag: null };
}

export interface ParamUpdate {
  symbol: string;
  value: number;
}

const clamp = (v: number, lo: number, hi: number) => Math.min(hi, Math.max(lo, v));

// Drag on a step-response curve. axis is the pixel-dominant direction of
// the gesture; x maps to speed (or dead time), y to gain (or damping).
export function stepDrag(
  templateId: string | null,
  params: Record<string, number>,
  start: { x: number; y: number },
  current: { x: number; y: number },
  axis: "x" | "y",
): ParamUpdate | null {
  if (!templateId) return null;
  if (templateId === "G1" || templateId === "G2") {
    if (axis === "x") {
      if (start.x <= 1e-6) return null;
      const name = templateId === "G1" ? "T_1" : "T_2";
      const factor = clamp(current.x / start.x, 0.01, 100);
      return { symbol: name, value: clamp(params[name] * factor, 0.01, 10) };
    }
    const name = templateId === "G1" ? "k_1" : "k_2";
    if (Math.abs(start.y) <= 1e-6) return null;
    const factor = current.y / start.y;
    return { symbol: name, value: clamp(params[name] * factor, -5, 5) };
  }
  if (templateId === "G3") {
    if (axis === "x") {
      if (current.x <= 1e-6 || start.x <= 1e-6) return null;
      // dragging right stretches the response: lower natural frequency
      const factor = clamp(start.x / current.x, 0.01, 100);
      return { symbol: "omega_0", value: clamp(params.omega_0 * factor, 0.1, 100) };
    }
    // dragging up increases the peak: less damping
    const dy = current.y - start.y;
    return { symbol: "zeta", value: clamp(params.zeta - dy, 0, 2) };
  }
  if (templateId === "G4") {
    if (axis !== "x") return null;
    const dt = current.x - start.x;
    return { symbol: "L", value: clamp(params.L + dt, 0.01, 10) };
  }
  return null;
}

// Vertical drag on a Bode magnitude curve changes the gain; the complex
// second-order family and the delayed family expose no magnitude handle.
export function bodeMagDrag(
  templateId: string | null,
  params: Record<string, number>,
  deltaDb: number,
): ParamUpdate | null {
  const gainName: Record<string, string> = { G1: "k_1", G2: "k_2", G5: "k_4" };
  if (!templateId || !(templateId in gainName)) return null;
  const name = gainName[templateId];
  return { symbol: name, value: clamp(params[name] * 10 ** (deltaDb / 20), -5, 5) };
}

// Dragging a pole cross in the Bode view moves its corner frequency.
export function bodeCrossDrag(
  templateId: string | null,
  params: Record<string, number>,
  poleIndex: number,
  omega: number,
): ParamUpdate | null {
  if (!templateId || omega <= 0) return null;
  if (templateId === "G4") return null; // only the dead time is adjustable
  if (templateId === "G1") {
    return { symbol: "T_1", value: clamp(1 / omega, 0.01, 10) };
  }
  if (templateId === "G2") {
    const name = poleIndex === 0 ? "T_2" : "T_3";
    return { symbol: name, value: clamp(1 / omega, 0.01, 10) };
  }
  if (templateId === "G3") {
    return { symbol: "omega_0", value: clamp(omega, 0.1, 100) };
  }
  if (templateId === "G6") {
    return { symbol: "T_5", value: clamp(1 / omega, 0.01, 10) };
  }
  return null;
}

// Per-key single-flight executor with a trailing slot: while a request for
// a key is in the air, only the newest queued call survives. Keeps at most
// one in-flight parameter request per system.
export class RequestCoalescer {
  private inflight = new Set<string>();
  private trailing = new Map<string, () => Promise<unknown>>();

  run(key: string, task: () => Promise<unknown>): void {
    if (this.inflight.has(key)) {
      this.trailing.set(key, task);
      return;
    }
    this.inflight.add(key);
    task()
      .catch(() => undefined)
      .finally(() => {
        this.inflight.delete(key);
        const next = this.trailing.get(key);
        if (next) {
          this.trailing.delete(key);
          this.run(key, next);
        }
      });
  }

  busy(key: string): boolean {
    return this.inflight.has(key);
  }
}
