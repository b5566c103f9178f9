"""Batch-scoring HTTP service over a JSON wire protocol (schema v1).

Stateless scoring: every response is semantically identical to calling
parse + score + group_advantages in-process. Task answers are hidden on
retrieval unless explicitly revealed.
"""

from __future__ import annotations

import time
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import __version__
from .dataset import instance_from_json, instance_to_json, load_split
from .rewards import (
    GrpoConfig,
    RewardConfig,
    RewardMode,
    group_advantages,
    score_completion,
)
from .tasks import TaskInstance

MAX_BATCH = 64


class ScoreRequest(BaseModel):
    task_id: str | None = None
    instance: dict | None = None
    completions: list[str]
    mode: str | None = None
    reward: dict | None = None
    grpo: dict | None = None


def _load_index(manifest_dir: Path) -> dict[str, TaskInstance]:
    index: dict[str, TaskInstance] = {}
    paths = sorted(manifest_dir.rglob("manifest.jsonl"))
    if not paths:
        raise FileNotFoundError(f"no manifest.jsonl under {manifest_dir}")
    for path in paths:
        manifest = load_split(path, check_images=False, verify_answers=False)
        for inst in manifest.instances:
            if inst.id in index:
                raise ValueError(f"duplicate task id {inst.id} across manifests")
            index[inst.id] = inst
    return index


def _reward_config(body: ScoreRequest, default: RewardConfig) -> RewardConfig:
    overrides = dict(body.reward or {})
    if body.mode is not None:
        overrides["mode"] = body.mode
    if not overrides:
        return default
    allowed = {"w_accuracy", "w_format", "w_caption", "w_progress_total", "mode"}
    unknown = set(overrides) - allowed
    if unknown:
        raise HTTPException(422, f"unknown reward keys: {sorted(unknown)}")
    try:
        if "mode" in overrides:
            overrides["mode"] = RewardMode(overrides["mode"])
        cfg = RewardConfig(**{**default.__dict__, **overrides})
        cfg.validate()
    except ValueError as exc:
        raise HTTPException(422, str(exc)) from exc
    return cfg


def _grpo_config(body: ScoreRequest, default: GrpoConfig) -> GrpoConfig:
    if not body.grpo:
        return default
    allowed = {"group_size", "beta", "epsilon_std"}
    unknown = set(body.grpo) - allowed
    if unknown:
        raise HTTPException(422, f"unknown grpo keys: {sorted(unknown)}")
    try:
        cfg = GrpoConfig(**{**default.__dict__, **body.grpo})
        cfg.validate()
    except (TypeError, ValueError) as exc:
        raise HTTPException(422, str(exc)) from exc
    return cfg


def create_app(
    manifest_dir: str | Path,
    reward: RewardConfig | None = None,
    grpo: GrpoConfig | None = None,
) -> FastAPI:
    default_reward = reward or RewardConfig()
    default_grpo = grpo or GrpoConfig()
    index = _load_index(Path(manifest_dir))
    app = FastAPI(title="shapebench reward service", version=__version__)

    @app.exception_handler(RequestValidationError)
    async def malformed_request(request: Request, exc: RequestValidationError):
        # Schema-level problems are 400; semantic invariants are 422.
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.get("/v1/health")
    def health():
        return {"status": "ok", "version": __version__, "tasks": len(index)}

    @app.get("/v1/tasks/{task_id}")
    def get_task(task_id: str, reveal: bool = False):
        inst = index.get(task_id)
        if inst is None:
            raise HTTPException(404, f"unknown task id {task_id}")
        record = instance_to_json(inst)
        if not reveal:
            # The trace and scene both determine the answer; strip them all.
            for key in ("answer", "trace", "scene"):
                record.pop(key, None)
        return record

    @app.post("/v1/score")
    def score_batch(body: ScoreRequest):
        started = time.perf_counter()
        if (body.task_id is None) == (body.instance is None):
            raise HTTPException(422, "provide exactly one of task_id or instance")
        if not (1 <= len(body.completions) <= MAX_BATCH):
            raise HTTPException(422, f"completions must have 1..{MAX_BATCH} entries")
        if body.task_id is not None:
            inst = index.get(body.task_id)
            if inst is None:
                raise HTTPException(404, f"unknown task id {body.task_id}")
        else:
            try:
                inst = instance_from_json(body.instance)
            except Exception as exc:
                raise HTTPException(422, f"bad inline instance: {exc}") from exc
        reward_cfg = _reward_config(body, default_reward)
        grpo_cfg = _grpo_config(body, default_grpo)
        results = [score_completion(c, inst, reward_cfg) for c in body.completions]
        advantages = None
        if len(results) == grpo_cfg.group_size:
            advantages = group_advantages([r.total for r in results], grpo_cfg)
        return {
            "benchmark_version": __version__,
            "results": [
                {
                    "accuracy": r.accuracy,
                    "format": r.format,
                    "caption": r.caption,
                    "progress": r.progress,
                    "subgoal_hits": list(r.subgoal_hits),
                    "total": r.total,
                }
                for r in results
            ],
            "advantages": advantages,
            "timing_ms": (time.perf_counter() - started) * 1000.0,
        }

    return app
