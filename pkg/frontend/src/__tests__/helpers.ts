// Shared test plumbing: a recording canvas context (jsdom has no real 2D
// backend) and a fetch mock that serves the captured API fixtures.

import { vi } from "vitest";
import fixtures from "./fixtures.json";

export interface RecordedOps {
  strokes: number;
  paths: { x: number; y: number }[][];
  arcs: { x: number; y: number; r: number }[];
}

export function installRecordingCanvas(): Map<HTMLCanvasElement, RecordedOps> {
  const registry = new Map<HTMLCanvasElement, RecordedOps>();
  (HTMLCanvasElement.prototype as any).getContext = function (this: HTMLCanvasElement) {
    if (!registry.has(this)) {
      registry.set(this, { strokes: 0, paths: [], arcs: [] });
    }
    const ops = registry.get(this)!;
    let current: { x: number; y: number }[] = [];
    return {
      canvas: this,
      clearRect: () => {
        ops.strokes = 0;
        ops.paths = [];
        ops.arcs = [];
      },
      strokeRect: () => undefined,
      beginPath: () => {
        current = [];
      },
      moveTo: (x: number, y: number) => current.push({ x, y }),
      lineTo: (x: number, y: number) => current.push({ x, y }),
      arc: (x: number, y: number, r: number) => ops.arcs.push({ x, y, r }),
      stroke: () => {
        ops.strokes += 1;
        if (current.length) ops.paths.push([...current]);
        current = [];
      },
      fill: () => undefined,
      setLineDash: () => undefined,
      set strokeStyle(_v: string) {},
      set fillStyle(_v: string) {},
      set lineWidth(_v: number) {},
    };
  };
  return registry;
}

type Fixtures = typeof fixtures;

export interface FetchLog {
  calls: { method: string; url: string; body: any }[];
}

// Serves fixture payloads and mutates a tiny bit of state so the smoke
// test can observe the post-drag world (T_1 = 0.5).
export function installFixtureFetch(): FetchLog {
  const log: FetchLog = { calls: [] };
  let sys1Moved = false;
  let quizServed = 0;

  const json = (body: unknown, status = 200) =>
    new Response(JSON.stringify(body), {
      status,
      headers: { "content-type": "application/json" },
    });

  const fx = fixtures as Fixtures;

  vi.stubGlobal(
    "fetch",
    vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
      const url = String(input);
      const method = (init?.method ?? "GET").toUpperCase();
      const body = init?.body ? JSON.parse(String(init.body)) : null;
      log.calls.push({ method, url, body });

      if (method === "POST" && url.endsWith("/api/v1/sessions")) {
        return json(fx.session);
      }
      if (method === "GET" && /\/sessions\/[^/]+$/.test(url)) {
        if (!sys1Moved) return json(fx.session);
        const snap = JSON.parse(JSON.stringify(fx.session));
        snap.systems[0].template.params.T_1 = 0.5;
        snap.systems[0].tf.den = [1.0, 0.5];
        return json(snap);
      }
      if (url.includes("/catalog/templates")) return json(fx.templates);
      if (url.includes("/catalog/achievements")) {
        return json({ achievements: [{ id: "x", title: "X marks", points: 10 }] });
      }
      if (url.includes("/catalog/questions/")) return json(fx.question_layers);
      if (url.includes("/catalog/questions")) return json(fx.question_topics);
      if (url.endsWith("/assignments")) return json(fx.assignments);

      const view = url.match(/\/systems\/(sys-\d+)\/(bode|nyquist|step|pzmap|margins)/);
      if (view && method === "GET") {
        const [, sysId, kind] = view;
        if (sysId === "sys-1" && sys1Moved && kind === "step") {
          return json(fx.step_sys1_after);
        }
        if (sysId === "sys-1" && sys1Moved && kind === "pzmap") {
          return json(fx.pzmap_sys1_after);
        }
        return json((fx as any)[kind][sysId]);
      }
      if (method === "POST" && url.includes("/pole-move")) {
        sys1Moved = true;
        return json(fx.pole_move_sys1);
      }
      if (method === "POST" && url.includes("/quiz/next")) {
        quizServed += 1;
        return json(quizServed === 1 ? fx.quiz_q1 : fx.quiz_q2);
      }
      if (method === "POST" && url.includes("/quiz/answer")) {
        const omega = body?.answer?.omega;
        const target = (fx.quiz_q1.question.target as any).omega;
        const correct =
          typeof omega === "number" &&
          Math.abs(Math.log10(omega / target)) <= fx.quiz_q1.question.tolerance;
        return json({
          ...fx.quiz_answer_correct,
          correct,
          feedback: correct ? "Correct." : "You clicked 1.0 decades above the target.",
        });
      }
      if (method === "POST" && url.includes("/events")) {
        return json({ unlocked: [], progress: fx.session.progress });
      }
      if (method === "POST" && url.includes("/hover")) {
        return json(fx.hover_mag);
      }
      if (method === "PATCH" && /\/sessions\/[^/]+$/.test(url)) {
        return json({ session: fx.session, unlocked: [] });
      }
      if (method === "PATCH" && url.includes("/params")) {
        return json({ system: fx.session.systems[0] });
      }
      throw new Error(`fixture fetch has no route for ${method} ${url}`);
    }),
  );
  return log;
}
