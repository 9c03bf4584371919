// Thin typed client over the session API. All math lives server-side;
// the UI never computes a transfer function itself.

import type {
  AssignmentPayload,
  BodePayload,
  MarginsPayload,
  NyquistPayload,
  PzmapPayload,
  QuizAnswerResponse,
  QuizQuestionPayload,
  SessionSnapshot,
  StepPayload,
  TemplateInfoPayload,
} from "./types";

export class ApiError extends Error {
  status: number;
  offset: number | null;

  constructor(status: number, message: string, offset: number | null = null) {
    super(message);
    this.status = status;
    this.offset = offset;
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(path, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  if (!response.ok) {
    let message = `${response.status}`;
    let offset: number | null = null;
    try {
      const body = await response.json();
      const detail = body.detail ?? body;
      message = typeof detail === "string" ? detail : detail.error ?? message;
      offset = typeof detail === "object" ? detail.offset ?? null : null;
    } catch {
      /* non-JSON error body */
    }
    throw new ApiError(response.status, message, offset);
  }
  return response.json() as Promise<T>;
}

const API = "/api/v1";

export class Client {
  async createSession(): Promise<SessionSnapshot> {
    return request(`${API}/sessions`, { method: "POST", body: "{}" });
  }

  async getSession(sid: string): Promise<SessionSnapshot> {
    return request(`${API}/sessions/${sid}`);
  }

  async patchSession(
    sid: string,
    body: { input_kind?: string; selected_id?: string },
  ): Promise<{ session: SessionSnapshot }> {
    return request(`${API}/sessions/${sid}`, {
      method: "PATCH",
      body: JSON.stringify(body),
    });
  }

  async addSystem(
    sid: string,
    source: { template?: string; expression?: string; env?: Record<string, number> },
  ) {
    return request<{ system_id: string }>(`${API}/sessions/${sid}/systems`, {
      method: "POST",
      body: JSON.stringify(source),
    });
  }

  async removeSystem(sid: string, systemId: string) {
    return request<{ session: SessionSnapshot }>(
      `${API}/sessions/${sid}/systems/${systemId}`,
      { method: "DELETE" },
    );
  }

  async setParam(sid: string, systemId: string, symbol: string, value: number) {
    return request(`${API}/sessions/${sid}/systems/${systemId}/params`, {
      method: "PATCH",
      body: JSON.stringify({ symbol, value }),
    });
  }

  async movePole(sid: string, systemId: string, index: number, re: number, im: number) {
    return request(`${API}/sessions/${sid}/systems/${systemId}/pole-move`, {
      method: "POST",
      body: JSON.stringify({ index, re, im }),
    });
  }

  async bode(sid: string, systemId: string, points = 400): Promise<BodePayload> {
    return request(`${API}/sessions/${sid}/systems/${systemId}/bode?points=${points}`);
  }

  async nyquist(sid: string, systemId: string, points = 400): Promise<NyquistPayload> {
    return request(`${API}/sessions/${sid}/systems/${systemId}/nyquist?points=${points}`);
  }

  async step(sid: string, systemId: string, timePoints = 300): Promise<StepPayload> {
    return request(
      `${API}/sessions/${sid}/systems/${systemId}/step?time_points=${timePoints}`,
    );
  }

  async pzmap(sid: string, systemId: string): Promise<PzmapPayload> {
    return request(`${API}/sessions/${sid}/systems/${systemId}/pzmap`);
  }

  async margins(sid: string, systemId: string): Promise<MarginsPayload> {
    return request(`${API}/sessions/${sid}/systems/${systemId}/margins`);
  }

  async templates(): Promise<{ templates: TemplateInfoPayload[] }> {
    return request(`${API}/catalog/templates`);
  }

  async sendEvent(sid: string, kind: string, payload: Record<string, unknown> = {}) {
    return request<{ unlocked: { id: string; title: string }[] }>(
      `${API}/sessions/${sid}/events`,
      { method: "POST", body: JSON.stringify({ kind, payload }) },
    );
  }

  async quizNext(sid: string, category?: string): Promise<{ question: QuizQuestionPayload }> {
    return request(`${API}/sessions/${sid}/quiz/next`, {
      method: "POST",
      body: JSON.stringify(category ? { category } : {}),
    });
  }

  async quizAnswer(sid: string, answer: Record<string, unknown>): Promise<QuizAnswerResponse> {
    return request(`${API}/sessions/${sid}/quiz/answer`, {
      method: "POST",
      body: JSON.stringify({ answer }),
    });
  }

  async assignments(sid: string): Promise<{ assignments: AssignmentPayload[] }> {
    return request(`${API}/sessions/${sid}/assignments`);
  }

  async checkAssignment(sid: string, assignmentId: string, systemId: string) {
    return request<{ passed: boolean; explanation: string | null }>(
      `${API}/sessions/${sid}/assignments/${assignmentId}/check`,
      { method: "POST", body: JSON.stringify({ system_id: systemId }) },
    );
  }

  async hover(sid: string, plot: string, coordinate: Record<string, number>) {
    return request<Record<string, { [k: string]: number }>>(
      `${API}/sessions/${sid}/hover`,
      { method: "POST", body: JSON.stringify({ plot, coordinate }) },
    );
  }

  async questionTopics(): Promise<{ topics: string[] }> {
    return request(`${API}/catalog/questions`);
  }

  async questionLayers(topic: string) {
    return request<{ topic: string; layers: Record<string, string> }>(
      `${API}/catalog/questions/${encodeURIComponent(topic)}`,
    );
  }
}
