import { createReadStream } from "node:fs";
import { createInterface } from "node:readline";

import { z } from "zod";

import { SchemaError } from "./errors.js";
import { TASK_CODES, type TrainerTask } from "./types.js";

// Only the fields a trainer may see are parsed; everything else in the
// record (including the answer) is never read.
const headerSchema = z.object({
  record_type: z.literal("header"),
  schema_version: z.literal(1),
  split: z.enum(["train", "eval"]),
  n: z.number().int().nonnegative(),
});

const taskViewSchema = z.object({
  record_type: z.literal("task"),
  id: z.string().min(1),
  code: z.enum(TASK_CODES),
  question: z.string().min(1),
  image_ref: z.string().nullable(),
});

function parseLine(raw: string, line: number): unknown {
  try {
    return JSON.parse(raw);
  } catch (cause) {
    throw new SchemaError("(json)", `invalid JSON: ${(cause as Error).message}`, line);
  }
}

function firstIssue(error: z.ZodError): { field: string; detail: string } {
  const issue = error.issues[0];
  return { field: issue.path.join(".") || "(record)", detail: issue.message };
}

export interface IterTasksOptions {
  /** Require the manifest header to declare this split. */
  split?: "train" | "eval";
}

/**
 * Stream trainer-ready records from a manifest, in file order.
 *
 * Yields only {id, prompt, imagePath, code}; ground-truth answers and
 * reference traces never leave this function. Corrupt lines and schema
 * mismatches raise SchemaError with the line number and offending field.
 */
export async function* iterTasks(
  manifestPath: string,
  options: IterTasksOptions = {},
): AsyncGenerator<TrainerTask> {
  const reader = createInterface({
    input: createReadStream(manifestPath, { encoding: "utf-8" }),
    crlfDelay: Infinity,
  });
  let lineNo = 0;
  let declared = 0;
  let yielded = 0;
  for await (const raw of reader) {
    lineNo += 1;
    if (raw.trim() === "") {
      throw new SchemaError("(record)", "blank line", lineNo);
    }
    const obj = parseLine(raw, lineNo);
    if (lineNo === 1) {
      const header = headerSchema.safeParse(obj);
      if (!header.success) {
        const { field, detail } = firstIssue(header.error);
        throw new SchemaError(field, detail, 1);
      }
      if (options.split !== undefined && header.data.split !== options.split) {
        throw new SchemaError(
          "split",
          `manifest is the ${header.data.split} split, expected ${options.split}`,
          1,
        );
      }
      declared = header.data.n;
      continue;
    }
    const task = taskViewSchema.safeParse(obj);
    if (!task.success) {
      const { field, detail } = firstIssue(task.error);
      throw new SchemaError(field, detail, lineNo);
    }
    yielded += 1;
    yield {
      id: task.data.id,
      prompt: task.data.question,
      imagePath: task.data.image_ref,
      code: task.data.code,
    };
  }
  if (lineNo === 0) {
    throw new SchemaError("(record)", "empty manifest", 0);
  }
  if (yielded !== declared) {
    throw new SchemaError("n", `header declares ${declared} records, found ${yielded}`, lineNo);
  }
}
