"""Task construction: codes, ground-truth answers, questions, and reference traces.

Nine task codes pair pure-text (PT) and multimodal (MM) variants of three
objectives — total/queried area (GR), nearest-shape grid position (SR), and
their composition (COMP) — plus out-of-distribution twists of each MM task
(largest area, farthest shape, max of target/farthest areas).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import IllPosedScene
from .geometry import Shape, area, area_formula_latex, format_exact, rounded_area
from .scenes import FreeScene, GridScene, Scene, manhattan


class TaskCode(str, Enum):
    PT_GR = "PT_GR"
    PT_SR = "PT_SR"
    PT_COMP = "PT_COMP"
    MM_GR = "MM_GR"
    MM_SR = "MM_SR"
    MM_COMP = "MM_COMP"
    MM_GR_OOD = "MM_GR_OOD"
    MM_SR_OOD = "MM_SR_OOD"
    MM_COMP_OOD = "MM_COMP_OOD"

    @property
    def is_multimodal(self) -> bool:
        return self.value.startswith("MM_")

    @property
    def is_ood(self) -> bool:
        return self.value.endswith("_OOD")

    @property
    def family(self) -> str:
        """GR, SR, or COMP."""
        return self.value.split("_")[1]

    @property
    def cli_name(self) -> str:
        return self.value.lower().replace("_", "-")


# Codes that exist for evaluation only under the default split policy.
EVAL_ONLY_CODES = frozenset(
    {TaskCode.PT_COMP, TaskCode.MM_COMP, TaskCode.MM_GR_OOD, TaskCode.MM_SR_OOD, TaskCode.MM_COMP_OOD}
)


class AnswerKind(str, Enum):
    INTEGER = "integer"
    CELL = "cell"


def answer_kind(code: TaskCode) -> AnswerKind:
    return AnswerKind.CELL if code.family == "SR" else AnswerKind.INTEGER


@dataclass(frozen=True)
class IntegerArea:
    value: int


@dataclass(frozen=True)
class GridCell:
    row: int
    col: int


Answer = IntegerArea | GridCell


@dataclass(frozen=True)
class SubgoalFact:
    """One checkable intermediate quantity of a reference derivation.

    kind is one of "shape_area" (value = rounded area), "distance"
    (value = Manhattan distance from the target), or "extreme_shape"
    (which is "nearest" or "farthest"; value unused).
    """

    kind: str
    color: str
    value: int | None = None
    which: str | None = None


@dataclass(frozen=True)
class ReferenceTrace:
    caption: str
    think: str
    answer_text: str
    subgoals: tuple[SubgoalFact, ...]

    @property
    def sft_target(self) -> str:
        return f"<think>{self.think}</think><answer>{self.answer_text}</answer>"

    @property
    def rlground_target(self) -> str:
        return f"<caption>{self.caption}</caption>{self.sft_target}"


@dataclass(frozen=True)
class TaskInstance:
    id: str
    code: TaskCode
    question: str
    scene_text: str | None
    image_ref: str | None
    answer: Answer
    trace: ReferenceTrace
    scene: Scene
    gr_mode: str | None = None  # recorded for GR-family instances

    def __post_init__(self):
        if self.code.is_multimodal:
            if self.image_ref is None or self.scene_text is not None:
                raise ValueError(f"{self.code.value} instance must carry image_ref only")
        else:
            if self.scene_text is None or self.image_ref is not None:
                raise ValueError(f"{self.code.value} instance must carry scene_text only")
        if isinstance(self.answer, IntegerArea):
            if answer_kind(self.code) is not AnswerKind.INTEGER or self.answer.value < 1:
                raise ValueError("integer answer invalid for this code")
        else:
            if answer_kind(self.code) is not AnswerKind.CELL:
                raise ValueError("cell answer invalid for this code")
            if not isinstance(self.scene, GridScene):
                raise ValueError("cell answer requires a grid scene")
            n = self.scene.grid_n
            if not (1 <= self.answer.row <= n and 1 <= self.answer.col <= n):
                raise ValueError("cell answer outside the grid")


def _check_scene_type(scene: Scene, code: TaskCode) -> None:
    want_grid = code.family in ("SR", "COMP")
    if want_grid and not isinstance(scene, GridScene):
        raise ValueError(f"{code.value} requires a grid scene")
    if not want_grid and not isinstance(scene, FreeScene):
        raise ValueError(f"{code.value} requires a free scene")


def _distances(scene: GridScene) -> list[tuple[int, int]]:
    """(shape index, distance) for every non-target shape, in placement order."""
    target_cell = scene.placements[scene.target_index].cell
    return [
        (i, manhattan(target_cell, p.cell))
        for i, p in enumerate(scene.placements)
        if i != scene.target_index
    ]


def _unique_extreme(scene: GridScene, which: str) -> int:
    """Index of the unique nearest/farthest non-target shape, or IllPosedScene."""
    dists = _distances(scene)
    pick = min if which == "nearest" else max
    best = pick(d for _, d in dists)
    hits = [i for i, d in dists if d == best]
    if len(hits) != 1:
        raise IllPosedScene(f"{which} shape is not unique (distance {best})")
    return hits[0]


def _unique_largest_index(scene: FreeScene) -> int:
    areas = [area(p.shape) for p in scene.shapes]
    top = max(areas)
    if areas.count(top) != 1:
        raise IllPosedScene(f"largest area is not unique ({format_exact(top)})")
    return areas.index(top)


def ground_truth(scene: Scene, code: TaskCode, gr_mode: str = "total") -> Answer:
    """Recompute the answer for (scene, code) from first principles."""
    _check_scene_type(scene, code)
    if code.family == "GR":
        if code.is_ood:
            return IntegerArea(rounded_area(scene.shapes[_unique_largest_index(scene)].shape))
        if gr_mode == "single":
            return IntegerArea(rounded_area(scene.shapes[scene.target_index].shape))
        return IntegerArea(sum(rounded_area(p.shape) for p in scene.shapes))
    if code.family == "SR":
        which = "farthest" if code.is_ood else "nearest"
        idx = _unique_extreme(scene, which)
        row, col = scene.placements[idx].cell
        return GridCell(row, col)
    # COMP family
    target = scene.placements[scene.target_index].shape
    if code.is_ood:
        farthest = scene.placements[_unique_extreme(scene, "farthest")].shape
        return IntegerArea(max(rounded_area(target), rounded_area(farthest)))
    nearest = scene.placements[_unique_extreme(scene, "nearest")].shape
    return IntegerArea(rounded_area(target) + rounded_area(nearest))


def _dims_phrase(shape: Shape) -> str:
    d = shape.dims
    if shape.kind.value == "square":
        return f"with side {d[0]} units"
    if shape.kind.value == "rectangle":
        return f"with width {d[0]} units and height {d[1]} units"
    if shape.kind.value == "right_triangle":
        return f"with legs {d[0]} and {d[1]} units"
    return f"with bases {d[0]} and {d[1]} units and height {d[2]} units"


def _shape_phrase(shape: Shape) -> str:
    return f"{shape.color.name} {shape.kind.display_name}"


def render_scene_text(scene: Scene) -> str:
    """Deterministic natural-language description: one sentence per shape."""
    if isinstance(scene, FreeScene):
        parts = [f"There are {len(scene.shapes)} shapes."]
        for p in scene.shapes:
            parts.append(f"A {_shape_phrase(p.shape)} {_dims_phrase(p.shape)}.")
        return " ".join(parts)
    parts = [
        f"There are {len(scene.placements)} shapes on a {scene.grid_n} by {scene.grid_n} grid."
    ]
    for p in scene.placements:
        row, col = p.cell
        parts.append(
            f"A {_shape_phrase(p.shape)} {_dims_phrase(p.shape)} at cell ({row}, {col})."
        )
    return " ".join(parts)


_INT_FORMAT = "Answer with a single integer."
_CELL_FORMAT = "Answer with the grid position formatted as (row, col)."


def _question_core(code: TaskCode, scene: Scene, gr_mode: str) -> str:
    where = " in the image" if code.is_multimodal else " described above"
    if code.family == "GR":
        if code.is_ood:
            return f"What is the area of the largest shape{where}?"
        if gr_mode == "single":
            color = scene.shapes[scene.target_index].shape.color.name
            return f"What is the area of the {color} shape{where}?"
        return f"What is the total area of all the shapes{where}?"
    target_color = scene.placements[scene.target_index].shape.color.name
    if code.family == "SR":
        rel = "farthest from" if code.is_ood else "nearest to"
        return (
            f"Which cell contains the shape {rel} the {target_color} shape{where},"
            f" measured by Manhattan distance?"
        )
    if code.is_ood:
        return (
            f"Between the {target_color} shape{where} and the shape farthest from it"
            f" by Manhattan distance, what is the area of the larger one?"
        )
    return (
        f"What is the combined area of the {target_color} shape{where} and the"
        f" shape nearest to it by Manhattan distance?"
    )


def render_question(code: TaskCode, scene: Scene, gr_mode: str = "total") -> str:
    """Full question text; PT variants embed the scene description."""
    _check_scene_type(scene, code)
    fmt = _CELL_FORMAT if answer_kind(code) is AnswerKind.CELL else _INT_FORMAT
    core = f"{_question_core(code, scene, gr_mode)} {fmt}"
    if code.is_multimodal:
        return core
    return f"{render_scene_text(scene)}\n{core}"


def _area_line(shape: Shape) -> tuple[str, int]:
    """Trace sentence deriving one shape's rounded area, plus that value."""
    exact = area(shape)
    rounded = rounded_area(shape)
    line = f"The {_shape_phrase(shape)} has area {area_formula_latex(shape)}"
    if exact.denominator != 1:
        line += f", rounded to {rounded}"
    return line + ".", rounded


def _grid_spatial_lines(scene: GridScene, which: str) -> tuple[list[str], list[SubgoalFact], int]:
    """Target/distance/extreme sentences shared by SR and COMP traces."""
    target = scene.placements[scene.target_index]
    trow, tcol = target.cell
    lines = [f"The target is the {_shape_phrase(target.shape)} at cell ({trow}, {tcol})."]
    subgoals = []
    for i, dist in _distances(scene):
        p = scene.placements[i]
        row, col = p.cell
        lines.append(
            f"Distance to the {_shape_phrase(p.shape)} at ({row}, {col}):"
            f" |{trow} - {row}| + |{tcol} - {col}| = {dist}."
        )
        subgoals.append(SubgoalFact("distance", p.shape.color.name, value=dist))
    extreme_idx = _unique_extreme(scene, which)
    ep = scene.placements[extreme_idx]
    erow, ecol = ep.cell
    lines.append(
        f"The {which} shape is the {_shape_phrase(ep.shape)} at cell ({erow}, {ecol})."
    )
    subgoals.append(SubgoalFact("extreme_shape", ep.shape.color.name, which=which))
    return lines, subgoals, extreme_idx


def build_trace(scene: Scene, code: TaskCode, gr_mode: str = "total") -> ReferenceTrace:
    """Reference derivation: caption, stepwise think text, answer, subgoals."""
    _check_scene_type(scene, code)
    caption = render_scene_text(scene)
    lines: list[str] = []
    subgoals: list[SubgoalFact] = []

    if code.family == "GR":
        if code.is_ood:
            values = []
            for p in scene.shapes:
                line, rounded = _area_line(p.shape)
                lines.append(line)
                subgoals.append(SubgoalFact("shape_area", p.shape.color.name, value=rounded))
                values.append(rounded)
            winner = scene.shapes[_unique_largest_index(scene)].shape
            answer_value = rounded_area(winner)
            lines.append(
                f"Comparing the areas, the largest is the {_shape_phrase(winner)}"
                f" with area {answer_value}."
            )
        elif gr_mode == "single":
            target = scene.shapes[scene.target_index].shape
            lines.append(f"The target is the {_shape_phrase(target)}.")
            line, answer_value = _area_line(target)
            lines.append(line)
            subgoals.append(SubgoalFact("shape_area", target.color.name, value=answer_value))
            lines.append(f"The area of the {target.color.name} shape is {answer_value}.")
        else:
            values = []
            for p in scene.shapes:
                line, rounded = _area_line(p.shape)
                lines.append(line)
                subgoals.append(SubgoalFact("shape_area", p.shape.color.name, value=rounded))
                values.append(rounded)
            answer_value = sum(values)
            lines.append(
                f"Total area: {' + '.join(str(v) for v in values)} = {answer_value}."
            )
        answer_text = str(answer_value)

    elif code.family == "SR":
        which = "farthest" if code.is_ood else "nearest"
        spatial, subs, extreme_idx = _grid_spatial_lines(scene, which)
        lines.extend(spatial)
        subgoals.extend(subs)
        row, col = scene.placements[extreme_idx].cell
        answer_text = f"({row}, {col})"

    else:  # COMP family
        which = "farthest" if code.is_ood else "nearest"
        spatial, subs, extreme_idx = _grid_spatial_lines(scene, which)
        lines.extend(spatial)
        subgoals.extend(subs)
        target = scene.placements[scene.target_index].shape
        other = scene.placements[extreme_idx].shape
        t_line, t_area = _area_line(target)
        o_line, o_area = _area_line(other)
        lines.extend([t_line, o_line])
        subgoals.append(SubgoalFact("shape_area", target.color.name, value=t_area))
        subgoals.append(SubgoalFact("shape_area", other.color.name, value=o_area))
        if code.is_ood:
            answer_value = max(t_area, o_area)
            lines.append(
                f"Comparing {t_area} and {o_area}, the larger area is {answer_value}."
            )
        else:
            answer_value = t_area + o_area
            lines.append(f"Combined area: {t_area} + {o_area} = {answer_value}.")
        answer_text = str(answer_value)

    return ReferenceTrace(
        caption=caption,
        think=" ".join(lines),
        answer_text=answer_text,
        subgoals=tuple(subgoals),
    )


def make_instance(
    code: TaskCode,
    scene: Scene,
    instance_id: str,
    gr_mode: str = "total",
    image_ref: str | None = None,
) -> TaskInstance:
    """Assemble a full task instance from a well-posed scene."""
    answer = ground_truth(scene, code, gr_mode)
    trace = build_trace(scene, code, gr_mode)
    question = render_question(code, scene, gr_mode)
    if code.is_multimodal:
        scene_text = None
        image_ref = image_ref or f"images/{instance_id}.png"
    else:
        scene_text = render_scene_text(scene)
        image_ref = None
    return TaskInstance(
        id=instance_id,
        code=code,
        question=question,
        scene_text=scene_text,
        image_ref=image_ref,
        answer=answer,
        trace=trace,
        scene=scene,
        gr_mode=gr_mode if code.family == "GR" else None,
    )
