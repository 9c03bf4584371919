import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { Client } from "../api";
import { QuizFlow, renderAchievements, renderProgressHeader } from "../gamify";
import fixtures from "./fixtures.json";
import { FetchLog, installFixtureFetch } from "./helpers";

describe("QuizFlow", () => {
  let log: FetchLog;
  beforeEach(() => {
    log = installFixtureFetch();
  });
  afterEach(() => {
    vi.unstubAllGlobals();
  });

  it("a correct answer advances immediately to the next question", async () => {
    const flow = new QuizFlow(new Client(), "fixture-session");
    await flow.start("click_frequency");
    const first = flow.state.question!;
    expect(flow.state.phase).toBe("question");
    const target = (fixtures.quiz_q1.question.target as any).omega as number;
    const correct = await flow.answer({ omega: target });
    expect(correct).toBe(true);
    // straight to the next question: no feedback stop
    expect(flow.state.phase).toBe("question");
    expect(flow.state.question).not.toEqual(first);
    const nextCalls = log.calls.filter((c) => c.url.includes("/quiz/next"));
    expect(nextCalls).toHaveLength(2);
  });

  it("a wrong answer shows tailored feedback and waits", async () => {
    const flow = new QuizFlow(new Client(), "fixture-session");
    await flow.start("click_frequency");
    const target = (fixtures.quiz_q1.question.target as any).omega as number;
    const correct = await flow.answer({ omega: target * 10 });
    expect(correct).toBe(false);
    expect(flow.state.phase).toBe("feedback");
    expect(flow.state.feedback).toContain("decades above the target");
    const nextCalls = log.calls.filter((c) => c.url.includes("/quiz/next"));
    expect(nextCalls).toHaveLength(1); // no auto-advance on a miss
    await flow.continueAfterFeedback();
    expect(flow.state.phase).toBe("question");
  });
});

describe("panel rendering", () => {
  it("renders the progress header with level, points, badges", () => {
    const el = document.createElement("div");
    renderProgressHeader(el, {
      total_points: 120,
      level: 1,
      points: { achievements: 100, assignments: 10, quiz: 10 },
      badges: { achievements: "silver", assignments: "none", quiz: "none" },
      unlocked: [],
    });
    expect(el.textContent).toContain("level 1");
    expect(el.textContent).toContain("120 points");
    expect(el.textContent).toContain("achievements: silver");
  });

  it("marks unlocked achievements with a filled star", () => {
    const el = document.createElement("div");
    renderAchievements(
      el,
      [
        { id: "a", title: "First", points: 10 },
        { id: "b", title: "Second", points: 10 },
      ],
      ["a"],
    );
    const rows = [...el.querySelectorAll(".achievement")];
    expect(rows).toHaveLength(2);
    expect(rows[0].className).toContain("unlocked");
    expect(rows[0].textContent).toContain("★");
    expect(rows[1].textContent).toContain("☆");
  });
});
