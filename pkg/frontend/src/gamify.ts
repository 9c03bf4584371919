// Gamification panels: progress header, achievements, assignments, and the
// quiz flow (a correct answer immediately requests the next question; a
// wrong one shows the tailored feedback and waits).

import type { Client } from "./api";
import type {
  AchievementPayload,
  AssignmentPayload,
  ProgressPayload,
  QuizQuestionPayload,
} from "./types";

export type QuizPhase = "idle" | "question" | "feedback";

export interface QuizViewState {
  phase: QuizPhase;
  question: QuizQuestionPayload | null;
  feedback: string | null;
  lastCorrect: boolean | null;
}

export class QuizFlow {
  state: QuizViewState = { phase: "idle", question: null, feedback: null, lastCorrect: null };
  onChange: (state: QuizViewState) => void = () => undefined;

  constructor(
    private client: Client,
    private sid: string,
  ) {}

  private setState(next: QuizViewState) {
    this.state = next;
    this.onChange(next);
  }

  async start(category?: string): Promise<void> {
    const { question } = await this.client.quizNext(this.sid, category);
    this.setState({ phase: "question", question, feedback: null, lastCorrect: null });
  }

  async answer(payload: Record<string, unknown>): Promise<boolean> {
    const result = await this.client.quizAnswer(this.sid, payload);
    if (result.correct) {
      // straight on to the next question, same category
      const category = this.state.question?.category;
      const { question } = await this.client.quizNext(this.sid, category);
      this.setState({
        phase: "question",
        question,
        feedback: result.feedback,
        lastCorrect: true,
      });
    } else {
      this.setState({
        phase: "feedback",
        question: this.state.question,
        feedback: result.feedback,
        lastCorrect: false,
      });
    }
    return result.correct;
  }

  async continueAfterFeedback(): Promise<void> {
    await this.start(this.state.question?.category);
  }
}

export function renderProgressHeader(el: HTMLElement, progress: ProgressPayload) {
  const badges = Object.entries(progress.badges)
    .map(([category, badge]) => `${category}: ${badge}`)
    .join("  ");
  el.textContent = `level ${progress.level} | ${progress.total_points} points | ${badges}`;
}

export function renderAchievements(
  el: HTMLElement,
  catalog: AchievementPayload[],
  unlocked: string[],
) {
  el.replaceChildren();
  const owned = new Set(unlocked);
  for (const achievement of catalog) {
    const row = el.ownerDocument.createElement("div");
    row.className = owned.has(achievement.id) ? "achievement unlocked" : "achievement";
    row.textContent = `${owned.has(achievement.id) ? "★" : "☆"} ${achievement.title}`;
    el.appendChild(row);
  }
}

export function renderAssignments(
  el: HTMLElement,
  assignments: AssignmentPayload[],
  onCheck: (assignmentId: string) => void,
) {
  el.replaceChildren();
  for (const assignment of assignments) {
    const row = el.ownerDocument.createElement("div");
    row.className = assignment.completed ? "assignment done" : "assignment";
    const text = el.ownerDocument.createElement("span");
    text.textContent = `[${assignment.group}] ${assignment.prose}`;
    const button = el.ownerDocument.createElement("button");
    button.textContent = assignment.completed ? "done" : "check";
    button.disabled = assignment.completed;
    button.addEventListener("click", () => onCheck(assignment.id));
    row.append(text, button);
    el.appendChild(row);
  }
}
