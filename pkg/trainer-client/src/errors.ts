/** Error taxonomy: API responses, transport failures, and schema mismatches. */

/** Non-2xx response from the service. Never retried. */
export class ApiError extends Error {
  readonly status: number;
  readonly body: string;

  constructor(status: number, body: string) {
    super(`service responded ${status}: ${body.slice(0, 200)}`);
    this.name = "ApiError";
    this.status = status;
    this.body = body;
  }

  /** "client" for 4xx, "server" for 5xx. */
  get kind(): "client" | "server" {
    return this.status >= 500 ? "server" : "client";
  }
}

/** Network-level failure (connection refused/reset, timeout). Retryable. */
export class TransportError extends Error {
  constructor(message: string, options?: { cause?: unknown }) {
    super(message, options);
    this.name = "TransportError";
  }
}

/** A manifest or response did not match the frozen v1 schema. */
export class SchemaError extends Error {
  readonly field: string;
  readonly line?: number;

  constructor(field: string, detail: string, line?: number) {
    super(line === undefined ? `field ${field}: ${detail}` : `line ${line}, field ${field}: ${detail}`);
    this.name = "SchemaError";
    this.field = field;
    this.line = line;
  }
}
