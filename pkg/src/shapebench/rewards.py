"""Verifiable rewards and group-relative advantages.

Four components: accuracy (exact answer match), format (required tag flags),
caption (every scene color mentioned), and progress (fraction of reference
subgoals verifiably present in the think block). The active set depends on
the reward mode; weights are configurable.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import GroupSizeMismatch, LengthMismatch
from .parsing import ParsedCompletion, extract_numbers, parse
from .scenes import scene_colors
from .tasks import SubgoalFact, TaskInstance, answer_kind, render_scene_text


class RewardMode(str, Enum):
    BASELINE = "baseline"
    CAPTION_ONLY = "caption_only"
    PROGRESS_ONLY = "progress_only"
    RL_GROUND = "rl_ground"

    @property
    def caption_active(self) -> bool:
        return self in (RewardMode.CAPTION_ONLY, RewardMode.RL_GROUND)

    @property
    def progress_active(self) -> bool:
        return self in (RewardMode.PROGRESS_ONLY, RewardMode.RL_GROUND)

    @property
    def parse_mode(self) -> str:
        return "rl_ground" if self.caption_active else "standard"


# Format flags that must hold, per mode. Modes that teach the caption format
# also require the caption block and the caption<think<answer ordering.
_REQUIRED_FLAGS = {
    RewardMode.BASELINE: ("has_think", "has_answer"),
    RewardMode.PROGRESS_ONLY: ("has_think", "has_answer"),
    RewardMode.CAPTION_ONLY: ("has_caption", "has_think", "has_answer", "blocks_in_order"),
    RewardMode.RL_GROUND: ("has_caption", "has_think", "has_answer", "blocks_in_order"),
}

# Anti-gaming guard: a think block with more than GUARD_FACTOR times the
# scene's numeric-token count scores zero progress.
PROGRESS_GUARD_FACTOR = 10


@dataclass(frozen=True)
class RewardConfig:
    w_accuracy: float = 1.0
    w_format: float = 0.5
    w_caption: float = 0.25
    w_progress_total: float = 0.5
    mode: RewardMode = RewardMode.BASELINE

    def validate(self) -> None:
        for name in ("w_accuracy", "w_format", "w_caption", "w_progress_total"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    @property
    def max_total(self) -> float:
        total = self.w_accuracy + self.w_format
        if self.mode.caption_active:
            total += self.w_caption
        if self.mode.progress_active:
            total += self.w_progress_total
        return total


@dataclass(frozen=True)
class RewardBreakdown:
    accuracy: float
    format: float
    caption: float
    progress: float
    subgoal_hits: tuple[bool, ...]
    total: float


@dataclass(frozen=True)
class GrpoConfig:
    group_size: int = 8
    beta: float = 0.0
    epsilon_std: float = 1e-8

    def validate(self) -> None:
        if self.group_size < 2:
            raise ValueError("group_size must be >= 2")
        if self.beta < 0:
            raise ValueError("beta must be >= 0")


def _mentions_color(text: str, color: str) -> bool:
    return re.search(rf"\b{re.escape(color)}\b", text, re.IGNORECASE) is not None


def _caption_reward(parsed: ParsedCompletion, instance: TaskInstance) -> float:
    if parsed.caption is None:
        return 0.0
    colors = scene_colors(instance.scene)
    return 1.0 if all(_mentions_color(parsed.caption, c) for c in colors) else 0.0


_EXTREME_WORDS = {
    "nearest": ("nearest", "closest"),
    "farthest": ("farthest", "furthest"),
}


def _extreme_hit(think: str, fact: SubgoalFact) -> bool:
    """The correct color named in the same sentence as the extreme keyword."""
    # Sentence-ending periods only; decimals like 25.5 do not split.
    for sentence in re.split(r"\.(?=\s|$)", think):
        low = sentence.lower()
        if any(w in low for w in _EXTREME_WORDS[fact.which]) and _mentions_color(low, fact.color):
            return True
    return False


def _progress(parsed: ParsedCompletion, instance: TaskInstance) -> tuple[float, tuple[bool, ...]]:
    subgoals = instance.trace.subgoals
    misses = tuple(False for _ in subgoals)
    if not subgoals or parsed.think is None:
        return 0.0, misses
    numbers = extract_numbers(parsed.think)
    scene_tokens = sum(extract_numbers(render_scene_text(instance.scene)).values())
    if sum(numbers.values()) > PROGRESS_GUARD_FACTOR * max(1, scene_tokens):
        return 0.0, misses
    hits = []
    for fact in subgoals:
        if fact.kind == "extreme_shape":
            hits.append(_extreme_hit(parsed.think, fact))
        else:
            hits.append(Fraction(fact.value) in numbers)
    return sum(hits) / len(hits), tuple(hits)


def score(parsed: ParsedCompletion, instance: TaskInstance, cfg: RewardConfig) -> RewardBreakdown:
    """Per-completion reward components and their weighted total."""
    cfg.validate()
    accuracy = 1.0 if parsed.answer is not None and parsed.answer == instance.answer else 0.0
    required = _REQUIRED_FLAGS[cfg.mode]
    fmt = sum(getattr(parsed.format_flags, f) for f in required) / len(required)
    caption = _caption_reward(parsed, instance)
    progress, hits = _progress(parsed, instance)
    total = cfg.w_accuracy * accuracy + cfg.w_format * fmt
    if cfg.mode.caption_active:
        total += cfg.w_caption * caption
    if cfg.mode.progress_active:
        total += cfg.w_progress_total * progress
    return RewardBreakdown(
        accuracy=accuracy,
        format=fmt,
        caption=caption,
        progress=progress,
        subgoal_hits=hits,
        total=total,
    )


def score_completion(completion: str, instance: TaskInstance, cfg: RewardConfig) -> RewardBreakdown:
    """parse + score in one step, using the mode's parse settings."""
    parsed = parse(completion, answer_kind(instance.code), cfg.mode.parse_mode)
    return score(parsed, instance, cfg)


def group_advantages(rewards: list[float], cfg: GrpoConfig) -> list[float]:
    """Group-relative advantages: (r - mean) / population std.

    Degenerate groups (std below epsilon_std, including exactly equal
    rewards) map to all-zero advantages instead of dividing by ~0.
    """
    cfg.validate()
    if len(rewards) != cfg.group_size:
        raise GroupSizeMismatch(
            f"expected a group of {cfg.group_size} rewards, got {len(rewards)}"
        )
    mean = math.fsum(rewards) / len(rewards)
    std = math.sqrt(math.fsum((r - mean) ** 2 for r in rewards) / len(rewards))
    if std <= cfg.epsilon_std:
        return [0.0] * len(rewards)
    return [(r - mean) / std for r in rewards]


def kl_penalty(logp_policy: list[float], logp_ref: list[float], cfg: GrpoConfig) -> float:
    """Nonnegative per-token KL estimator, scaled by beta.

    mean(exp(d) - d - 1) with d = logp_ref - logp_policy; zero when beta is 0
    (the default operating point) or for identical sequences.
    """
    if len(logp_policy) != len(logp_ref):
        raise LengthMismatch(
            f"policy has {len(logp_policy)} tokens, reference has {len(logp_ref)}"
        )
    if cfg.beta == 0 or not logp_policy:
        return 0.0
    total = math.fsum(
        math.exp(r - p) - (r - p) - 1 for p, r in zip(logp_policy, logp_ref)
    )
    return cfg.beta * total / len(logp_policy)
