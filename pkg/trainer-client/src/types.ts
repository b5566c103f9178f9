/** Frozen v1 wire and manifest types. Field names must match the service byte-for-byte. */

export const TASK_CODES = [
  "PT_GR",
  "PT_SR",
  "PT_COMP",
  "MM_GR",
  "MM_SR",
  "MM_COMP",
  "MM_GR_OOD",
  "MM_SR_OOD",
  "MM_COMP_OOD",
] as const;

export type TaskCode = (typeof TASK_CODES)[number];

export interface RewardBreakdown {
  accuracy: number;
  format: number;
  caption: number;
  progress: number;
  subgoal_hits: boolean[];
  total: number;
}

export interface ScoreResponse {
  benchmark_version: string;
  results: RewardBreakdown[];
  advantages: number[] | null;
  timing_ms: number;
}

/** Service response plus the verbatim body it was parsed from. */
export interface ScoreGroupResult extends ScoreResponse {
  raw: string;
}

export interface HealthResponse {
  status: string;
  version: string;
  tasks: number;
}

/** Task record as returned by GET /v1/tasks/{id} (answer withheld by default). */
export interface TaskRecord {
  record_type: "task";
  id: string;
  code: TaskCode;
  question: string;
  scene_text: string | null;
  image_ref: string | null;
  gr_mode?: string;
  [key: string]: unknown;
}

/** What a training loop consumes per task: prompt and image only, never answers. */
export interface TrainerTask {
  id: string;
  prompt: string;
  imagePath: string | null;
  code: TaskCode;
}

export interface RetryPolicy {
  /** Total attempts including the first (>= 1). */
  maxAttempts: number;
  /** Base backoff; doubles per retry. */
  backoffMs: number;
}

export interface ClientConfig {
  baseUrl: string;
  /** Per-attempt budget; a timed-out attempt counts as a transport failure. */
  timeoutMs?: number;
  retry?: Partial<RetryPolicy>;
}

export interface ScoreGroupOptions {
  mode?: "baseline" | "caption_only" | "progress_only" | "rl_ground";
  reward?: Record<string, number | string>;
  grpo?: { group_size?: number; beta?: number; epsilon_std?: number };
}
