"""Declarative config file shared by all CLI subcommands and the service.

JSON or YAML by extension; four optional sections: generation, render,
reward, grpo. Unknown keys are rejected so typos fail loudly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path

import yaml

from .render import RenderSpec
from .rewards import GrpoConfig, RewardConfig, RewardMode
from .scenes import GenConfig


@dataclass(frozen=True)
class BenchConfig:
    gen: GenConfig
    render: RenderSpec
    reward: RewardConfig
    grpo: GrpoConfig


DEFAULT_CONFIG = BenchConfig(
    gen=GenConfig(), render=RenderSpec(), reward=RewardConfig(), grpo=GrpoConfig()
)


def _build(cls, section: dict, name: str):
    allowed = {f.name for f in fields(cls)}
    unknown = set(section) - allowed
    if unknown:
        raise ValueError(f"unknown {name} config keys: {sorted(unknown)}")
    if cls is RewardConfig and "mode" in section:
        section = {**section, "mode": RewardMode(section["mode"])}
    return cls(**section)


def config_from_dict(data: dict) -> BenchConfig:
    unknown = set(data) - {"generation", "render", "reward", "grpo"}
    if unknown:
        raise ValueError(f"unknown config sections: {sorted(unknown)}")
    cfg = BenchConfig(
        gen=_build(GenConfig, data.get("generation", {}), "generation"),
        render=_build(RenderSpec, data.get("render", {}), "render"),
        reward=_build(RewardConfig, data.get("reward", {}), "reward"),
        grpo=_build(GrpoConfig, data.get("grpo", {}), "grpo"),
    )
    cfg.gen.validate()
    cfg.reward.validate()
    cfg.grpo.validate()
    return cfg


def load_config(path: str | Path | None) -> BenchConfig:
    if path is None:
        return DEFAULT_CONFIG
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix in (".yaml", ".yml"):
        data = yaml.safe_load(text) or {}
    else:
        data = json.loads(text)
    if not isinstance(data, dict):
        raise ValueError("config file must contain a mapping")
    return config_from_dict(data)
