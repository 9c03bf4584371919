// Payload shapes of the analysis API (mirrors the server's JSON).

export interface TfPayload {
  num: number[];
  den: number[];
  delay: number;
}

export interface TemplatePayload {
  id: string;
  params: Record<string, number>;
}

export interface SystemPayload {
  id: string;
  tf: TfPayload;
  template: TemplatePayload | null;
  source: string | null;
  env: Record<string, number>;
  color: number;
}

export interface QuizLevel {
  difficulty: number;
  streak: number;
}

export interface ProgressPayload {
  total_points: number;
  level: number;
  points: Record<string, number>;
  badges: Record<string, string>;
  unlocked: string[];
}

export interface SessionSnapshot {
  session_id: string;
  input_kind: "step" | "impulse";
  selected_id: string | null;
  systems: SystemPayload[];
  quiz: Record<string, QuizLevel>;
  progress: ProgressPayload;
}

export interface BodePayload {
  omega: number[];
  re: number[];
  im: number[];
  mag_db: number[];
  phase_deg: number[];
}

export interface NyquistPayload {
  omega: number[];
  re: number[];
  im: number[];
}

export interface StepPayload {
  t: number[];
  y: (number | null)[];
  method: string;
  input_kind: string;
}

export interface PzPoint {
  re: number;
  im: number;
}

export interface PzmapPayload {
  poles: PzPoint[];
  zeros: PzPoint[];
}

export interface MarginsPayload {
  gain_margin: number | null;
  gm_db: number | null;
  omega_pc: number | null;
  phase_margin_deg: number | null;
  omega_gc: number | null;
}

export interface ParamSpecPayload {
  name: string;
  default: number;
  min: number;
  max: number;
  scale: "linear" | "log";
}

export interface TemplateInfoPayload {
  id: string;
  title: string;
  expression: string;
  params: ParamSpecPayload[];
}

export interface AchievementPayload {
  id: string;
  title: string;
  points: number;
}

export interface AssignmentPayload {
  id: string;
  group: string;
  prose: string;
  completed: boolean;
}

export interface QuizQuestionPayload {
  category: string;
  difficulty: number;
  prompt: string;
  target: Record<string, number | string>;
  tolerance: number;
  systems: TfPayload[];
}

export interface QuizAnswerResponse {
  correct: boolean;
  feedback: string;
  quiz: Record<string, QuizLevel>;
  progress: ProgressPayload;
  unlocked: AchievementPayload[];
}

export type PaneKind = "bode_mag" | "bode_phase" | "step" | "nyquist" | "pzmap";
