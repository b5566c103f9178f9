"""Command-line entry point: gen, validate, simulate, score, serve.

Exit codes: 0 success, 1 usage error, 2 data error (validation or
generation failure, reported with the failing record where known).
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from . import __version__
from .agents import AgentKind, respond
from .config import load_config
from .dataset import generate_split, load_split, write_manifest
from .errors import ShapeBenchError
from .rewards import RewardMode, group_advantages, score_completion
from .tasks import TaskCode

ENV_MANIFEST_DIR = "SHAPEBENCH_MANIFEST_DIR"
ENV_HOST = "SHAPEBENCH_HOST"
ENV_PORT = "SHAPEBENCH_PORT"

_CODE_BY_CLI = {code.cli_name: code for code in TaskCode}


def _parse_code(value: str) -> TaskCode:
    code = _CODE_BY_CLI.get(value.lower())
    if code is None:
        raise click.UsageError(
            f"unknown task code {value!r}; choose from {', '.join(sorted(_CODE_BY_CLI))}"
        )
    return code


def _parse_mode(value: str) -> RewardMode:
    try:
        return RewardMode(value)
    except ValueError:
        raise click.UsageError(
            f"unknown mode {value!r}; choose from {', '.join(m.value for m in RewardMode)}"
        )


@click.group()
@click.version_option(version=__version__)
def cli():
    """Compositional shape-reasoning benchmark tools."""


@cli.command()
@click.option("--code", required=True, help="Task code, e.g. mm-sr or pt-gr.")
@click.option("--n", required=True, type=int, help="Number of records.")
@click.option("--seed", required=True, type=int, help="Master seed.")
@click.option("--out", required=True, type=click.Path(), help="Output directory.")
@click.option("--split", default="train", show_default=True, type=click.Choice(["train", "eval"]))
@click.option("--config", "config_path", default=None, type=click.Path(exists=True))
@click.option("--allow-train", is_flag=True, help="Allow training splits for eval-only codes.")
@click.option("--png/--no-png", default=True, show_default=True, help="Rasterize PNG images.")
def gen(code, n, seed, out, split, config_path, allow_train, png):
    """Generate a dataset split: manifest.jsonl plus images for MM codes."""
    task_code = _parse_code(code)
    cfg = load_config(config_path)
    try:
        manifest = generate_split(
            task_code, n, seed, cfg.gen, split=split, allow_train=allow_train
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))
    path = write_manifest(manifest, out, spec=cfg.render, write_png=png)
    click.echo(f"wrote {manifest.header.n} records to {path}")


@cli.command()
@click.argument("manifest", type=click.Path(exists=True))
@click.option("--images/--no-images", default=True, show_default=True,
              help="Also require referenced image files to exist.")
def validate(manifest, images):
    """Re-derive every answer in a manifest and verify all invariants."""
    loaded = load_split(manifest, check_images=images, verify_answers=True)
    click.echo(f"ok: {loaded.header.n} records, code {loaded.header.code.value}")


@cli.command()
@click.option("--manifest", required=True, type=click.Path(exists=True))
@click.option("--agent", required=True, type=click.Choice([a.value for a in AgentKind]))
@click.option("--mode", default="baseline", show_default=True)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--report-out", default=None, type=click.Path())
def simulate(manifest, agent, mode, seed, report_out):
    """Run a scripted agent over a manifest and report mean reward components."""
    reward_mode = _parse_mode(mode)
    agent_kind = AgentKind(agent)
    loaded = load_split(manifest, check_images=False, verify_answers=False)
    cfg = load_config(None).reward
    cfg = type(cfg)(**{**cfg.__dict__, "mode": reward_mode})
    sums = {"accuracy": 0.0, "format": 0.0, "caption": 0.0, "progress": 0.0, "total": 0.0}
    for inst in loaded.instances:
        completion = respond(agent_kind, inst, seed)
        breakdown = score_completion(completion, inst, cfg)
        for key in sums:
            sums[key] += getattr(breakdown, key)
    n = len(loaded.instances)
    report = {
        "agent": agent_kind.value,
        "mode": reward_mode.value,
        "n": n,
        "seed": seed,
        **{f"mean_{k}": v / n for k, v in sums.items()},
    }
    text = json.dumps(report, indent=2, sort_keys=False)
    if report_out:
        Path(report_out).write_text(text + "\n", encoding="utf-8")
    click.echo(text)


@cli.command()
@click.option("--manifest", required=True, type=click.Path(exists=True))
@click.option("--completions", "completions_path", required=True, type=click.Path(exists=True),
              help="JSONL of {task_id, completions: [...]} groups.")
@click.option("--mode", default="baseline", show_default=True)
@click.option("--out", default=None, type=click.Path(), help="Write JSONL here instead of stdout.")
def score(manifest, completions_path, mode, out):
    """Score completion groups from a file against a manifest."""
    reward_mode = _parse_mode(mode)
    loaded = load_split(manifest, check_images=False, verify_answers=False)
    index = loaded.by_id()
    cfg = load_config(None)
    reward_cfg = type(cfg.reward)(**{**cfg.reward.__dict__, "mode": reward_mode})
    lines_out = []
    with open(completions_path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
                task_id = obj["task_id"]
                completions = obj["completions"]
            except (json.JSONDecodeError, KeyError) as exc:
                raise ShapeBenchError(f"completions line {line_no}: {exc}")
            inst = index.get(task_id)
            if inst is None:
                raise ShapeBenchError(f"completions line {line_no}: unknown task id {task_id}")
            results = [score_completion(c, inst, reward_cfg) for c in completions]
            advantages = None
            if len(results) == cfg.grpo.group_size:
                advantages = group_advantages([r.total for r in results], cfg.grpo)
            lines_out.append(json.dumps({
                "task_id": task_id,
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
            }, separators=(",", ":")))
    text = "\n".join(lines_out) + ("\n" if lines_out else "")
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@cli.command()
@click.option("--manifest-dir", default=None, type=click.Path(),
              help=f"Defaults to ${ENV_MANIFEST_DIR}.")
@click.option("--host", default=None, help=f"Defaults to ${ENV_HOST} or 127.0.0.1.")
@click.option("--port", default=None, type=int, help=f"Defaults to ${ENV_PORT} or 8000.")
def serve(manifest_dir, host, port):
    """Start the scoring service (blocks). Flag > env > default precedence."""
    import uvicorn

    from .service import create_app

    manifest_dir = manifest_dir or os.environ.get(ENV_MANIFEST_DIR)
    if not manifest_dir:
        raise click.UsageError(f"--manifest-dir or ${ENV_MANIFEST_DIR} is required")
    host = host or os.environ.get(ENV_HOST, "127.0.0.1")
    port = port or int(os.environ.get(ENV_PORT, "8000"))
    app = create_app(manifest_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")


def main(argv: list[str] | None = None) -> int:
    """Entry point with the documented exit-code contract."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.exceptions.Abort:
        return 1
    except ShapeBenchError as exc:
        click.echo(f"data error: {exc}", err=True)
        return 2
    except FileNotFoundError as exc:
        click.echo(f"data error: {exc}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
