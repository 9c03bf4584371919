// Application shell: five linked panes, the system sidebar with sliders,
// the margins readout, and the gamification panels. Every number shown
// comes from the API; the UI only maps coordinates and draws.

import { ApiError, Client } from "./api";
import { QuizFlow, renderAchievements, renderAssignments, renderProgressHeader } from "./gamify";
import {
  drawHorizontalLine,
  drawNyquistCircle,
  drawNyquistRay,
  drawSnapDot,
  drawVerticalLine,
  HoverAnnotations,
} from "./hover";
import {
  beginDrag,
  bodeMagDrag,
  endDrag,
  initialInteractionState,
  InteractionState,
  RequestCoalescer,
  stepDrag,
} from "./interactions";
import { colorFor, emptyStore, formatMargins, PlotPane, SeriesStore } from "./panes";
import { formatParam, fromSlider, toSlider } from "./params";
import { QuestionMode } from "./questions";
import type {
  AchievementPayload,
  MarginsPayload,
  PaneKind,
  ParamSpecPayload,
  SessionSnapshot,
  SystemPayload,
  TemplateInfoPayload,
} from "./types";

const PANE_KINDS: PaneKind[] = ["bode_mag", "bode_phase", "step", "nyquist", "pzmap"];

export class App {
  readonly client: Client;
  readonly root: HTMLElement;
  sid = "";
  snapshot: SessionSnapshot | null = null;
  store: SeriesStore = emptyStore();
  panes = new Map<PaneKind, PlotPane>();
  interactions: InteractionState = initialInteractionState();
  coalescer = new RequestCoalescer();
  quiz: QuizFlow | null = null;
  questionMode: QuestionMode | null = null;
  templates: TemplateInfoPayload[] = [];
  achievements: AchievementPayload[] = [];
  margins: MarginsPayload | null = null;
  private hoverEventsSent = new Set<string>();

  constructor(root: HTMLElement, client: Client = new Client()) {
    this.root = root;
    this.client = client;
  }

  static async create(root: HTMLElement, client: Client = new Client()): Promise<App> {
    const app = new App(root, client);
    await app.start();
    return app;
  }

  async start(): Promise<void> {
    this.snapshot = await this.client.createSession();
    this.sid = this.snapshot.session_id;
    this.templates = (await this.client.templates()).templates;
    this.quiz = new QuizFlow(this.client, this.sid);
    this.buildDom();
    this.questionMode = new QuestionMode(
      this.client,
      this.root.querySelector<HTMLElement>(".plots")!,
    );
    this.wireEvents();
    await this.refreshAll();
  }

  // ------------------------------------------------------------------ DOM

  private buildDom() {
    const doc = this.root.ownerDocument;
    this.root.innerHTML = `
      <header class="topbar">
        <span class="progress-header"></span>
        <span class="menu">
          <button data-panel="quiz">quiz</button>
          <button data-panel="assignments">assignments</button>
          <button data-panel="achievements">achievements</button>
          <button class="fullscreen">fullscreen</button>
          <button class="add-system">+</button>
        </span>
      </header>
      <main class="layout">
        <section class="plots"></section>
        <aside class="sidebar">
          <div class="input-kind">
            input:
            <select class="input-select">
              <option value="step">step</option>
              <option value="impulse">impulse</option>
            </select>
          </div>
          <div class="expression-row">
            <input class="expression-input" placeholder="e.g. 1/(1+0.5*s)^2" />
            <button class="expression-add">add</button>
            <span class="expression-error"></span>
          </div>
          <div class="systems"></div>
        </aside>
      </main>
      <footer class="margins-bar"><span class="margins-system"></span> <span class="margins-text"></span></footer>
      <div class="drawer" hidden></div>
    `;
    const plots = this.root.querySelector<HTMLElement>(".plots")!;
    for (const kind of PANE_KINDS) {
      const canvas = doc.createElement("canvas");
      canvas.width = kind === "pzmap" ? 300 : 420;
      canvas.height = kind === "step" ? 260 : 220;
      canvas.className = `pane pane-${kind}`;
      canvas.dataset.kind = kind;
      plots.appendChild(canvas);
      this.panes.set(kind, new PlotPane(kind, canvas));
    }
  }

  private renderSidebar() {
    if (!this.snapshot) return;
    const container = this.root.querySelector<HTMLElement>(".systems")!;
    container.replaceChildren();
    const doc = container.ownerDocument;
    for (const system of this.snapshot.systems) {
      const card = doc.createElement("div");
      card.className = "system-card";
      card.dataset.system = system.id;
      card.style.borderColor = colorFor(system.color);
      const title = doc.createElement("div");
      title.className = "system-title";
      title.textContent = this.describeSystem(system);
      const remove = doc.createElement("button");
      remove.className = "system-remove";
      remove.textContent = "x";
      remove.addEventListener("click", () => void this.removeSystem(system.id));
      const exportBtn = doc.createElement("a");
      exportBtn.className = "system-export";
      exportBtn.textContent = "code";
      exportBtn.href = `/api/v1/sessions/${this.sid}/systems/${system.id}/export?target=python`;
      title.append(remove, exportBtn);
      card.appendChild(title);
      if (system.template) {
        const info = this.templates.find((t) => t.id === system.template!.id);
        for (const spec of info?.params ?? []) {
          card.appendChild(this.buildSlider(system, spec));
        }
      } else {
        for (const [name, value] of Object.entries(system.env)) {
          card.appendChild(this.buildFreeSymbolRow(system, name, value));
        }
      }
      container.appendChild(card);
    }
  }

  private describeSystem(system: SystemPayload): string {
    if (system.template) return `${system.id} (${system.template.id})`;
    return `${system.id} (${system.source ?? "coefficients"})`;
  }

  private buildSlider(system: SystemPayload, spec: ParamSpecPayload): HTMLElement {
    const doc = this.root.ownerDocument;
    const row = doc.createElement("label");
    row.className = "slider-row";
    const value = system.template!.params[spec.name];
    const slider = doc.createElement("input");
    slider.type = "range";
    slider.min = "0";
    slider.max = "1000";
    slider.step = "1";
    slider.value = String(toSlider(value, spec));
    slider.dataset.system = system.id;
    slider.dataset.symbol = spec.name;
    const readout = doc.createElement("input");
    readout.type = "text";
    readout.className = "param-readout";
    readout.value = formatParam(value);
    readout.dataset.system = system.id;
    readout.dataset.symbol = spec.name;
    slider.addEventListener("input", () => {
      const v = fromSlider(Number(slider.value), spec);
      readout.value = formatParam(v);
      this.queueParamUpdate(system.id, spec.name, v);
    });
    readout.addEventListener("change", () => {
      const v = Number(readout.value);
      if (Number.isFinite(v)) this.queueParamUpdate(system.id, spec.name, v);
    });
    const label = doc.createElement("span");
    label.textContent = spec.name;
    row.append(label, slider, readout);
    return row;
  }

  private buildFreeSymbolRow(system: SystemPayload, name: string, value: number): HTMLElement {
    const doc = this.root.ownerDocument;
    const row = doc.createElement("label");
    row.className = "slider-row";
    const readout = doc.createElement("input");
    readout.type = "text";
    readout.className = "param-readout";
    readout.value = formatParam(value);
    readout.dataset.system = system.id;
    readout.dataset.symbol = name;
    readout.addEventListener("change", () => {
      const v = Number(readout.value);
      if (Number.isFinite(v)) this.queueParamUpdate(system.id, name, v);
    });
    const label = doc.createElement("span");
    label.textContent = name;
    row.append(label, readout);
    return row;
  }

  // ------------------------------------------------------------ data flow

  async refreshAll(): Promise<void> {
    if (!this.snapshot) return;
    this.store.colors.clear();
    for (const system of this.snapshot.systems) {
      this.store.colors.set(system.id, system.color);
    }
    const known = new Set(this.snapshot.systems.map((s) => s.id));
    for (const map of [this.store.bode, this.store.nyquist, this.store.step, this.store.pzmap]) {
      for (const key of [...map.keys()]) {
        if (!known.has(key)) map.delete(key);
      }
    }
    await Promise.all(this.snapshot.systems.map((s) => this.fetchSeries(s.id)));
    await this.refreshMargins();
    this.renderSidebar();
    this.renderPanes();
    this.renderProgress();
  }

  private async fetchSeries(systemId: string): Promise<void> {
    const [bode, nyquist, step, pzmap] = await Promise.all([
      this.client.bode(this.sid, systemId),
      this.client.nyquist(this.sid, systemId),
      this.client.step(this.sid, systemId),
      this.client.pzmap(this.sid, systemId),
    ]);
    this.store.bode.set(systemId, bode);
    this.store.nyquist.set(systemId, nyquist);
    this.store.step.set(systemId, step);
    this.store.pzmap.set(systemId, pzmap);
  }

  async refreshSystem(systemId: string): Promise<void> {
    this.snapshot = await this.client.getSession(this.sid);
    await this.fetchSeries(systemId);
    if (this.snapshot.selected_id === systemId) await this.refreshMargins();
    this.renderSidebar();
    this.renderPanes();
  }

  private async refreshMargins(): Promise<void> {
    const selected = this.snapshot?.selected_id;
    if (!selected) return;
    this.margins = await this.client.margins(this.sid, selected);
    this.renderMarginsBar();
  }

  renderPanes(): void {
    for (const pane of this.panes.values()) pane.render(this.store);
  }

  private renderMarginsBar(): void {
    const nameEl = this.root.querySelector<HTMLElement>(".margins-system")!;
    const textEl = this.root.querySelector<HTMLElement>(".margins-text")!;
    nameEl.textContent = this.snapshot?.selected_id ?? "";
    textEl.textContent = this.margins ? formatMargins(this.margins) : "";
  }

  private renderProgress(): void {
    const el = this.root.querySelector<HTMLElement>(".progress-header");
    if (el && this.snapshot) renderProgressHeader(el, this.snapshot.progress);
  }

  queueParamUpdate(systemId: string, symbol: string, value: number): void {
    // at most one in-flight request per system; the newest value wins
    this.coalescer.run(`param:${systemId}`, async () => {
      try {
        await this.client.setParam(this.sid, systemId, symbol, value);
        await this.refreshSystem(systemId);
      } catch (error) {
        if (!(error instanceof ApiError)) throw error;
        await this.refreshSystem(systemId); // settle back to server state
      }
    });
  }

  // --------------------------------------------------------------- events

  private wireEvents(): void {
    const pz = this.panes.get("pzmap")!;
    pz.canvas.addEventListener("mousedown", (ev) => this.onPzMouseDown(ev as MouseEvent));
    pz.canvas.addEventListener("mousemove", (ev) => this.onPzMouseMove(ev as MouseEvent));
    pz.canvas.addEventListener("mouseup", (ev) => void this.onPzMouseUp(ev as MouseEvent));

    for (const kind of ["bode_mag", "bode_phase", "nyquist", "step"] as PaneKind[]) {
      const pane = this.panes.get(kind)!;
      pane.canvas.addEventListener("mousemove", (ev) => {
        void this.onHover(pane, ev as MouseEvent);
      });
      pane.canvas.addEventListener("click", (ev) => {
        void this.onPaneClick(pane, ev as MouseEvent);
      });
    }

    this.root.addEventListener("contextmenu", (ev) => {
      ev.preventDefault();
      this.questionMode?.toggle();
    });

    this.root.querySelector<HTMLSelectElement>(".input-select")!.addEventListener(
      "change",
      (ev) => {
        const kind = (ev.target as HTMLSelectElement).value;
        void this.client.patchSession(this.sid, { input_kind: kind }).then(() => this.refreshAll());
      },
    );

    this.root.querySelector<HTMLButtonElement>(".expression-add")!.addEventListener(
      "click",
      () => void this.addExpression(),
    );
    this.root.querySelector<HTMLButtonElement>(".add-system")!.addEventListener(
      "click",
      () => void this.addTemplate(),
    );
    this.root.querySelector<HTMLButtonElement>(".fullscreen")!.addEventListener("click", () => {
      void this.client.sendEvent(this.sid, "fullscreen_toggled");
      this.root.ownerDocument.documentElement.requestFullscreen?.();
    });
    this.root.querySelector<HTMLElement>(".margins-system")!.addEventListener("click", () => {
      void this.cycleSelected();
    });
    for (const button of this.root.querySelectorAll<HTMLButtonElement>("[data-panel]")) {
      button.addEventListener("click", () => void this.openPanel(button.dataset.panel!));
    }
  }

  private pixelPoint(canvas: HTMLCanvasElement, ev: MouseEvent) {
    const rect = canvas.getBoundingClientRect();
    return { px: ev.clientX - rect.left, py: ev.clientY - rect.top };
  }

  private onPzMouseDown(ev: MouseEvent): void {
    const pane = this.panes.get("pzmap")!;
    if (!pane.scales || !this.snapshot) return;
    const { px, py } = this.pixelPoint(pane.canvas, ev);
    for (const system of this.snapshot.systems) {
      const payload = this.store.pzmap.get(system.id);
      if (!payload) continue;
      for (let index = 0; index < payload.poles.length; index++) {
        const pole = payload.poles[index];
        const dx = pane.scales.x.toPixel(pole.re) - px;
        const dy = pane.scales.y.toPixel(pole.im) - py;
        if (dx * dx + dy * dy <= 100) {
          this.interactions = beginDrag(this.interactions, {
            systemId: system.id,
            handle: "pole",
            templateId: system.template?.id ?? null,
            poleIndex: index,
            start: { x: pole.re, y: pole.im },
            startParams: { ...(system.template?.params ?? {}) },
          });
          return;
        }
      }
    }
  }

  private onPzMouseMove(ev: MouseEvent): void {
    const drag = this.interactions.drag;
    if (!drag || drag.handle !== "pole") return;
    const pane = this.panes.get("pzmap")!;
    if (!pane.scales) return;
    const { px, py } = this.pixelPoint(pane.canvas, ev);
    // optimistic ghost marker; the real series settle on release
    this.renderPanes();
    const ctx = pane.canvas.getContext("2d");
    if (ctx) {
      ctx.strokeStyle = "#555";
      ctx.beginPath();
      ctx.moveTo(px - 5, py - 5);
      ctx.lineTo(px + 5, py + 5);
      ctx.moveTo(px - 5, py + 5);
      ctx.lineTo(px + 5, py - 5);
      ctx.stroke();
    }
  }

  private async onPzMouseUp(ev: MouseEvent): Promise<void> {
    const drag = this.interactions.drag;
    this.interactions = endDrag(this.interactions);
    if (!drag || drag.handle !== "pole") return;
    const pane = this.panes.get("pzmap")!;
    if (!pane.scales) return;
    const { px, py } = this.pixelPoint(pane.canvas, ev);
    const re = pane.scales.x.fromPixel(px);
    const im = pane.scales.y.fromPixel(py);
    try {
      await this.client.movePole(this.sid, drag.systemId, drag.poleIndex, re, im);
    } catch (error) {
      if (!(error instanceof ApiError)) throw error;
      // unrepresentable move: settle back to the server state
    }
    await this.refreshSystem(drag.systemId);
  }

  private async onHover(pane: PlotPane, ev: MouseEvent): Promise<void> {
    if (!pane.scales) return;
    const { px, py } = this.pixelPoint(pane.canvas, ev);
    const x = pane.scales.x.fromPixel(px);
    const y = pane.scales.y.fromPixel(py);
    this.interactions = { ...this.interactions, hover: { pane: pane.kind, x, y } };
    this.sendHoverEventOnce(pane.kind);
    let coordinate: Record<string, number>;
    if (pane.kind === "bode_mag") coordinate = { mag_db: y };
    else if (pane.kind === "bode_phase") coordinate = { phase_deg: y };
    else if (pane.kind === "nyquist") coordinate = { re: x, im: y };
    else coordinate = { t: x, y };
    try {
      const annotations = (await this.client.hover(
        this.sid,
        pane.kind === "bode_mag" || pane.kind === "bode_phase" ? pane.kind : pane.kind,
        coordinate,
      )) as HoverAnnotations;
      this.drawHoverAnnotations(pane, annotations, px, py);
    } catch {
      /* hover is best-effort */
    }
  }

  private sendHoverEventOnce(kind: PaneKind): void {
    const event =
      kind === "nyquist" ? "nyquist_hovered" : kind === "step" ? "step_hovered" : "bode_hovered";
    if (this.hoverEventsSent.has(event)) return;
    this.hoverEventsSent.add(event);
    void this.client.sendEvent(this.sid, event).then(() => this.refreshProgressOnly());
  }

  private async refreshProgressOnly(): Promise<void> {
    this.snapshot = await this.client.getSession(this.sid);
    this.renderProgress();
  }

  private drawHoverAnnotations(
    source: PlotPane,
    annotations: HoverAnnotations,
    px: number,
    py: number,
  ): void {
    this.renderPanes();
    const nyq = this.panes.get("nyquist")!;
    const magPane = this.panes.get("bode_mag")!;
    const phasePane = this.panes.get("bode_phase")!;
    const stepPane = this.panes.get("step")!;
    const nctx = nyq.canvas.getContext("2d");
    if (annotations.nyquist_circle && nctx && nyq.scales) {
      drawNyquistCircle(nctx, nyq.scales, annotations.nyquist_circle.radius);
    }
    if (annotations.nyquist_ray && nctx && nyq.scales) {
      drawNyquistRay(nctx, nyq.scales, annotations.nyquist_ray.angle_deg);
    }
    if (annotations.bode_mag_line && magPane.scales) {
      const ctx = magPane.canvas.getContext("2d");
      if (ctx) {
        drawHorizontalLine(ctx, magPane.scales, annotations.bode_mag_line.mag_db, 0, magPane.canvas.width);
      }
    }
    if (annotations.bode_phase_line && phasePane.scales) {
      const ctx = phasePane.canvas.getContext("2d");
      if (ctx) {
        drawHorizontalLine(
          ctx,
          phasePane.scales,
          annotations.bode_phase_line.phase_deg,
          0,
          phasePane.canvas.width,
        );
      }
    }
    if (annotations.snapped && stepPane.scales) {
      const ctx = stepPane.canvas.getContext("2d");
      if (ctx && annotations.t !== undefined && annotations.y !== undefined) {
        drawSnapDot(ctx, stepPane.scales, annotations.t, annotations.y);
      }
    }
    if (source.kind === "bode_mag" || source.kind === "bode_phase") {
      // mirror the hovered frequency in both Bode panes
      for (const pane of [magPane, phasePane]) {
        const ctx = pane.canvas.getContext("2d");
        if (ctx && pane.scales && source.scales) {
          drawVerticalLine(ctx, pane.scales, source.scales.x.fromPixel(px), 0, pane.canvas.height);
        }
      }
    }
  }

  private async onPaneClick(pane: PlotPane, ev: MouseEvent): Promise<void> {
    // quiz answers come from clicking the plots
    if (!this.quiz || this.quiz.state.phase !== "question" || !pane.scales) return;
    const question = this.quiz.state.question!;
    const { px, py } = this.pixelPoint(pane.canvas, ev);
    const x = pane.scales.x.fromPixel(px);
    const y = pane.scales.y.fromPixel(py);
    if (question.category === "click_frequency" && (pane.kind === "bode_mag" || pane.kind === "bode_phase")) {
      await this.quiz.answer({ omega: x });
    } else if (question.category === "click_time" && pane.kind === "step") {
      await this.quiz.answer({ time: x });
    } else if (question.category === "click_nyquist_angle" && pane.kind === "nyquist") {
      await this.quiz.answer({ angle_deg: (Math.atan2(y, x) * 180) / Math.PI });
    }
  }

  private async addExpression(): Promise<void> {
    const input = this.root.querySelector<HTMLInputElement>(".expression-input")!;
    const errorEl = this.root.querySelector<HTMLElement>(".expression-error")!;
    errorEl.textContent = "";
    try {
      await this.client.addSystem(this.sid, { expression: input.value });
      input.value = "";
      this.snapshot = await this.client.getSession(this.sid);
      await this.refreshAll();
    } catch (error) {
      if (error instanceof ApiError) {
        errorEl.textContent =
          error.offset !== null ? `${error.message}` : error.message;
        return;
      }
      throw error;
    }
  }

  private async addTemplate(): Promise<void> {
    // the plus button offers the two extra families
    const existing = new Set(
      this.snapshot?.systems.map((s) => s.template?.id).filter(Boolean) ?? [],
    );
    const next = ["G5", "G6"].find((tid) => !existing.has(tid)) ?? "G1";
    await this.client.addSystem(this.sid, { template: next });
    this.snapshot = await this.client.getSession(this.sid);
    await this.refreshAll();
  }

  private async removeSystem(systemId: string): Promise<void> {
    const { session } = await this.client.removeSystem(this.sid, systemId);
    this.snapshot = session;
    await this.refreshAll();
  }

  private async cycleSelected(): Promise<void> {
    if (!this.snapshot || this.snapshot.systems.length === 0) return;
    const ids = this.snapshot.systems.map((s) => s.id);
    const at = ids.indexOf(this.snapshot.selected_id ?? ids[0]);
    const next = ids[(at + 1) % ids.length];
    const { session } = await this.client.patchSession(this.sid, { selected_id: next });
    this.snapshot = session;
    await this.refreshMargins();
  }

  private async openPanel(panel: string): Promise<void> {
    const drawer = this.root.querySelector<HTMLElement>(".drawer")!;
    drawer.hidden = false;
    drawer.dataset.panel = panel;
    drawer.replaceChildren();
    const doc = drawer.ownerDocument;
    const close = doc.createElement("button");
    close.className = "drawer-close";
    close.textContent = "close";
    close.addEventListener("click", () => {
      drawer.hidden = true;
    });
    drawer.appendChild(close);
    const body = doc.createElement("div");
    drawer.appendChild(body);
    if (panel === "achievements") {
      if (this.achievements.length === 0) {
        const response = await fetch("/api/v1/catalog/achievements");
        this.achievements = (await response.json()).achievements;
      }
      renderAchievements(body, this.achievements, this.snapshot?.progress.unlocked ?? []);
    } else if (panel === "assignments") {
      const { assignments } = await this.client.assignments(this.sid);
      renderAssignments(body, assignments, (assignmentId) =>
        void this.checkAssignment(assignmentId, body),
      );
    } else if (panel === "quiz") {
      this.renderQuizPanel(body);
      if (this.quiz && this.quiz.state.phase === "idle") await this.quiz.start();
    }
  }

  private renderQuizPanel(body: HTMLElement): void {
    if (!this.quiz) return;
    const doc = body.ownerDocument;
    const prompt = doc.createElement("p");
    prompt.className = "quiz-prompt";
    const feedback = doc.createElement("p");
    feedback.className = "quiz-feedback";
    const options = doc.createElement("div");
    options.className = "quiz-options";
    const next = doc.createElement("button");
    next.className = "quiz-continue";
    next.textContent = "next question";
    next.hidden = true;
    next.addEventListener("click", () => void this.quiz!.continueAfterFeedback());
    body.append(prompt, options, feedback, next);
    this.quiz.onChange = (state) => {
      prompt.textContent = state.question?.prompt ?? "";
      feedback.textContent = state.feedback ?? "";
      next.hidden = state.phase !== "feedback";
      options.replaceChildren();
      const q = state.question;
      if (
        state.phase === "question" &&
        q &&
        (q.category === "click_complexity" || q.category === "odd_one_out")
      ) {
        q.systems.forEach((_tf, index) => {
          const pick = doc.createElement("button");
          pick.className = "quiz-option";
          pick.textContent = `system ${index + 1}`;
          pick.addEventListener("click", () => void this.quiz!.answer({ system: index }));
          options.appendChild(pick);
        });
      }
      this.renderProgress();
    };
    this.quiz.onChange(this.quiz.state);
  }

  private async checkAssignment(assignmentId: string, body: HTMLElement): Promise<void> {
    const systemId = this.snapshot?.selected_id;
    if (!systemId) return;
    try {
      const result = await this.client.checkAssignment(this.sid, assignmentId, systemId);
      const note = body.ownerDocument.createElement("p");
      note.className = result.passed ? "assignment-pass" : "assignment-fail";
      note.textContent = result.passed
        ? `Nice work! ${result.explanation ?? ""}`
        : "Not there yet; keep exploring.";
      body.prepend(note);
      await this.refreshProgressOnly();
    } catch (error) {
      if (!(error instanceof ApiError)) throw error;
      const note = body.ownerDocument.createElement("p");
      note.className = "assignment-fail";
      note.textContent = error.message;
      body.prepend(note);
    }
  }
}

// Drag helpers are re-exported for the canvas wiring and the tests.
export { bodeMagDrag, stepDrag };

export async function main(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) return;
  await App.create(root);
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  void main();
}
