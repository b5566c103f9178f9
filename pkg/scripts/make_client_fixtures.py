"""Capture byte-exact service fixtures for the trainer-client test suite.

Writes a small real manifest plus verbatim request/response pairs from the
scoring service into trainer-client/fixtures/.
"""

from __future__ import annotations

import json
import shutil
import sys
from pathlib import Path

from fastapi.testclient import TestClient

from shapebench.agents import AgentKind, respond
from shapebench.dataset import generate_split, write_manifest
from shapebench.service import create_app
from shapebench.tasks import TaskCode

OUT = Path(__file__).resolve().parent.parent / "trainer-client" / "fixtures"
SEED = 555


def main() -> int:
    OUT.mkdir(parents=True, exist_ok=True)
    work = OUT / "dataset"
    if work.exists():
        shutil.rmtree(work)
    manifest = generate_split(TaskCode.MM_COMP, 6, SEED, split="eval")
    write_manifest(manifest, work / "mm_comp" / "eval")

    client = TestClient(create_app(work))
    cases = []

    def capture(name: str, method: str, path: str, payload=None):
        if method == "GET":
            resp = client.get(path)
        else:
            resp = client.post(path, json=payload)
        cases.append(
            {
                "name": name,
                "method": method,
                "path": path,
                "request_body": payload,
                "status": resp.status_code,
                "response_body": resp.text,
            }
        )
        return resp

    inst = manifest.instances[0]
    oracle = respond(AgentKind.CAPTION_ORACLE, inst, 0)
    capture(
        "oracle_group_degenerate",
        "POST",
        "/v1/score",
        {"task_id": inst.id, "completions": [oracle] * 8, "mode": "rl_ground"},
    )
    second = manifest.instances[1]
    mixed = [respond(AgentKind.CAPTION_ORACLE, second, 0)] + [
        respond(AgentKind.MALFORMED, second, s) for s in range(7)
    ]
    capture(
        "one_winner_group",
        "POST",
        "/v1/score",
        {"task_id": second.id, "completions": mixed, "mode": "rl_ground"},
    )
    third = manifest.instances[2]
    capture(
        "partial_batch_no_advantages",
        "POST",
        "/v1/score",
        {
            "task_id": third.id,
            "completions": [
                respond(AgentKind.ORACLE, third, 0),
                respond(AgentKind.BLIND, third, 0),
                respond(AgentKind.SUBSKILL_AREA, third, 0),
            ],
            "mode": "baseline",
        },
    )
    capture("unknown_task", "POST", "/v1/score", {"task_id": "ffffffffffffffff", "completions": ["x"]})
    capture(
        "bad_group_size",
        "POST",
        "/v1/score",
        {"task_id": inst.id, "completions": ["x"], "grpo": {"group_size": 1}},
    )
    capture("task_default", "GET", f"/v1/tasks/{inst.id}")
    capture("task_reveal", "GET", f"/v1/tasks/{inst.id}?reveal=true")
    capture("health", "GET", "/v1/health")

    (OUT / "score_cases.json").write_text(json.dumps(cases, indent=2) + "\n")
    print(f"wrote {len(cases)} cases and a {manifest.header.n}-record manifest to {OUT}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
