"""Scripted agents emitting completions of controlled quality.

Used to validate that the parser and rewards discriminate between perfect,
partially-grounded, blind, and malformed behavior without any neural model.
Every agent is a deterministic function of (instance, seed).
"""

from __future__ import annotations

import random
from enum import Enum

from .geometry import area_formula_latex, rounded_area
from .scenes import FreeScene, GridScene, derive_seed
from .tasks import AnswerKind, GridCell, IntegerArea, TaskInstance, answer_kind

# Blind integer guesses are uniform over this range: plausible three-digit
# magnitudes, but above the compositional answer ceiling (288 for default
# dims), so blind guessing can never luck into compositional credit.
BLIND_AREA_RANGE = (300, 999)


class AgentKind(str, Enum):
    ORACLE = "oracle"
    CAPTION_ORACLE = "caption_oracle"
    BLIND = "blind"
    SUBSKILL_AREA = "subskill_area"
    SUBSKILL_SPATIAL = "subskill_spatial"
    PARTIAL_PROGRESS = "partial_progress"
    MALFORMED = "malformed"


def _agent_rng(agent: AgentKind, instance: TaskInstance, seed: int) -> random.Random:
    return random.Random(derive_seed(seed, f"agent/{agent.value}/{instance.id}", 0))


def _wrap(think: str, answer: str) -> str:
    return f"<think>{think}</think><answer>{answer}</answer>"


def _target_shape(instance: TaskInstance):
    scene = instance.scene
    if isinstance(scene, FreeScene):
        return scene.shapes[scene.target_index].shape
    return scene.placements[scene.target_index].shape


def _blind_answer(instance: TaskInstance, rng: random.Random) -> str:
    # Blind agents know the answer format (and grid size), never the content.
    if answer_kind(instance.code) is AnswerKind.INTEGER:
        return str(rng.randint(*BLIND_AREA_RANGE))
    n = instance.scene.grid_n
    return f"({rng.randint(1, n)}, {rng.randint(1, n)})"


def _corrupted_answer(instance: TaskInstance) -> str:
    answer = instance.answer
    if isinstance(answer, IntegerArea):
        return str(answer.value + 1)
    n = instance.scene.grid_n
    return f"({answer.row % n + 1}, {answer.col})"


def _spatial_think(instance: TaskInstance) -> tuple[str, GridCell | None]:
    scene = instance.scene
    if not isinstance(scene, GridScene):
        return "I look for the nearest shape.", None
    from .scenes import manhattan

    target = scene.placements[scene.target_index]
    lines = []
    best = None
    for i, p in enumerate(scene.placements):
        if i == scene.target_index:
            continue
        d = manhattan(target.cell, p.cell)
        lines.append(f"Distance to the {p.shape.color.name} shape: {d}.")
        if best is None or d < best[0]:
            best = (d, p)
    lines.append(f"The nearest shape is the {best[1].shape.color.name} one.")
    return " ".join(lines), GridCell(*best[1].cell)


def respond(agent: AgentKind, instance: TaskInstance, seed: int = 0) -> str:
    """Emit this agent's completion for one task instance."""
    rng = _agent_rng(agent, instance, seed)
    if agent is AgentKind.ORACLE:
        return instance.trace.sft_target
    if agent is AgentKind.CAPTION_ORACLE:
        return instance.trace.rlground_target
    if agent is AgentKind.BLIND:
        return _wrap("I will guess.", _blind_answer(instance, rng))
    if agent is AgentKind.SUBSKILL_AREA:
        # Area skill only: computes the target's area and stops composing.
        target = _target_shape(instance)
        think = (
            f"The {target.color.name} shape has area {area_formula_latex(target)}."
        )
        return _wrap(think, str(rounded_area(target)))
    if agent is AgentKind.SUBSKILL_SPATIAL:
        # Spatial skill only: reports the nearest cell even when an area is asked.
        think, cell = _spatial_think(instance)
        answer = f"({cell.row}, {cell.col})" if cell else "(1, 1)"
        return _wrap(think, answer)
    if agent is AgentKind.PARTIAL_PROGRESS:
        # Every intermediate quantity correct, final answer corrupted.
        return _wrap(instance.trace.think, _corrupted_answer(instance))
    if agent is AgentKind.MALFORMED:
        guess = _blind_answer(instance, rng)
        return f"Looking at this, the result might be {guess}, but I am not sure."
    raise ValueError(f"unknown agent {agent!r}")
