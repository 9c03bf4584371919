// Question mode: right-click fills the screen with question markers; each
// marker reveals its topic's three-layer answer on hover.

import type { Client } from "./api";

export interface QuestionMarker {
  topic: string;
  x: number; // fractions of the container, 0..1
  y: number;
}

// Fixed marker layout: one marker near the plot region its topic explains.
export const MARKER_LAYOUT: QuestionMarker[] = [
  { topic: "bode magnitude plot", x: 0.16, y: 0.2 },
  { topic: "bode phase plot", x: 0.16, y: 0.62 },
  { topic: "delay and phase", x: 0.3, y: 0.74 },
  { topic: "step static gain", x: 0.52, y: 0.16 },
  { topic: "step time constant", x: 0.43, y: 0.3 },
  { topic: "damping and overshoot", x: 0.56, y: 0.36 },
  { topic: "nyquist critical point", x: 0.47, y: 0.68 },
  { topic: "pole-zero map axes", x: 0.72, y: 0.3 },
  { topic: "gain margin readout", x: 0.35, y: 0.93 },
  { topic: "phase margin readout", x: 0.6, y: 0.93 },
];

export class QuestionMode {
  active = false;
  private layer: HTMLElement | null = null;

  constructor(
    private client: Client,
    private container: HTMLElement,
  ) {}

  toggle(): boolean {
    this.active = !this.active;
    if (this.active) {
      this.show();
    } else {
      this.hide();
    }
    return this.active;
  }

  private show() {
    const doc = this.container.ownerDocument;
    this.layer = doc.createElement("div");
    this.layer.className = "question-layer";
    for (const marker of MARKER_LAYOUT) {
      const el = doc.createElement("div");
      el.className = "question-marker";
      el.textContent = "?";
      el.style.left = `${marker.x * 100}%`;
      el.style.top = `${marker.y * 100}%`;
      el.dataset.topic = marker.topic;
      el.addEventListener("mouseenter", () => this.reveal(el, marker.topic));
      this.layer.appendChild(el);
    }
    this.container.appendChild(this.layer);
  }

  private hide() {
    this.layer?.remove();
    this.layer = null;
  }

  private async reveal(markerEl: HTMLElement, topic: string) {
    const { layers } = await this.client.questionLayers(topic);
    const doc = markerEl.ownerDocument;
    markerEl.querySelector(".question-popup")?.remove();
    const popup = doc.createElement("div");
    popup.className = "question-popup";
    // summary first; deeper layers expand on demand
    for (const name of ["summary", "expanded", "mathematical"]) {
      const section = doc.createElement("details");
      if (name === "summary") section.setAttribute("open", "");
      const label = doc.createElement("summary");
      label.textContent = name;
      const body = doc.createElement("p");
      body.textContent = layers[name];
      section.append(label, body);
      popup.appendChild(section);
    }
    markerEl.appendChild(popup);
  }
}
