export { RewardServiceClient } from "./client.js";
export { iterTasks, type IterTasksOptions } from "./manifest.js";
export { ApiError, SchemaError, TransportError } from "./errors.js";
export type {
  ClientConfig,
  HealthResponse,
  RetryPolicy,
  RewardBreakdown,
  ScoreGroupOptions,
  ScoreGroupResult,
  ScoreResponse,
  TaskCode,
  TaskRecord,
  TrainerTask,
} from "./types.js";
export { TASK_CODES } from "./types.js";
