import { ApiError, TransportError } from "./errors.js";
import type {
  ClientConfig,
  HealthResponse,
  RetryPolicy,
  ScoreGroupOptions,
  ScoreGroupResult,
  TaskRecord,
} from "./types.js";

const DEFAULT_RETRY: RetryPolicy = { maxAttempts: 3, backoffMs: 250 };
const DEFAULT_TIMEOUT_MS = 30_000;

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

/**
 * Thin client for the v1 reward-service wire protocol.
 *
 * Values are returned exactly as the service serialized them — the client
 * never recomputes rewards or advantages. Retries apply to transport
 * failures only; any HTTP response, including 4xx/5xx, is surfaced as-is.
 */
export class RewardServiceClient {
  private readonly baseUrl: string;
  private readonly timeoutMs: number;
  private readonly retry: RetryPolicy;

  constructor(config: ClientConfig) {
    this.baseUrl = config.baseUrl.replace(/\/+$/, "");
    this.timeoutMs = config.timeoutMs ?? DEFAULT_TIMEOUT_MS;
    this.retry = { ...DEFAULT_RETRY, ...config.retry };
    if (this.retry.maxAttempts < 1) {
      throw new RangeError("retry.maxAttempts must be >= 1");
    }
  }

  async health(): Promise<HealthResponse> {
    const { parsed } = await this.request("GET", "/v1/health");
    return parsed as HealthResponse;
  }

  /** Fetch one task record; the answer stays hidden unless reveal is set. */
  async getTask(taskId: string, reveal = false): Promise<TaskRecord> {
    const query = reveal ? "?reveal=true" : "";
    const { parsed } = await this.request("GET", `/v1/tasks/${taskId}${query}`);
    return parsed as TaskRecord;
  }

  /** Score one group of completions against a task held by the service. */
  async scoreGroup(
    taskId: string,
    completions: string[],
    options: ScoreGroupOptions = {},
  ): Promise<ScoreGroupResult> {
    const body: Record<string, unknown> = { task_id: taskId, completions };
    if (options.mode !== undefined) body.mode = options.mode;
    if (options.reward !== undefined) body.reward = options.reward;
    if (options.grpo !== undefined) body.grpo = options.grpo;
    const { parsed, raw } = await this.request("POST", "/v1/score", body);
    return { ...(parsed as object), raw } as ScoreGroupResult;
  }

  private async request(
    method: "GET" | "POST",
    path: string,
    body?: unknown,
  ): Promise<{ parsed: unknown; raw: string }> {
    let lastFailure: unknown;
    for (let attempt = 1; attempt <= this.retry.maxAttempts; attempt++) {
      const controller = new AbortController();
      const timer = setTimeout(() => controller.abort(), this.timeoutMs);
      let response: Response;
      try {
        response = await fetch(this.baseUrl + path, {
          method,
          signal: controller.signal,
          headers: body === undefined ? undefined : { "content-type": "application/json" },
          body: body === undefined ? undefined : JSON.stringify(body),
        });
      } catch (cause) {
        // No HTTP response at all: retryable transport failure.
        lastFailure = cause;
        if (attempt < this.retry.maxAttempts) {
          await sleep(this.retry.backoffMs * 2 ** (attempt - 1));
          continue;
        }
        throw new TransportError(
          `${method} ${path} failed after ${attempt} attempt(s)`,
          { cause },
        );
      } finally {
        clearTimeout(timer);
      }
      const raw = await response.text();
      if (!response.ok) {
        throw new ApiError(response.status, raw);
      }
      return { parsed: JSON.parse(raw), raw };
    }
    /* istanbul ignore next -- loop either returns or throws */
    throw new TransportError(`${method} ${path} exhausted retries`, { cause: lastFailure });
  }
}
