"""Scene samplers: free-layout scenes for area tasks, grid scenes for spatial tasks.

All sampling is a pure function of (seed, config). Grid cells are 1-based
(row, col) with row 1 at the top.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass

from .errors import GenerationExhausted
from .geometry import DIMENSION_FIELDS, PALETTE, Shape, ShapeKind, area, unit_extent

FREE_CANVAS = 512
CELL_PX = 100
GRID_CELL_PAD = 8
# px-per-unit ladder for free scenes: rejection sampling starts large and
# shrinks when placement keeps failing.
FREE_SCALE_LADDER = (20, 16, 12, 9, 6)
FREE_MARGIN = 26

_MASK64 = (1 << 64) - 1


def derive_seed(master: int, label: str, index: int) -> int:
    """64-bit stream seed derived from (master seed, stream label, index)."""
    key = f"{master & _MASK64}|{label}|{index}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big")


class SceneRng:
    """Deterministic RNG stream (Mersenne Twister under a 64-bit seed).

    Same seed, same call sequence, same platform-independent results.
    """

    def __init__(self, seed: int):
        self.seed = seed & _MASK64
        self._rng = random.Random(self.seed)

    def randint(self, lo: int, hi: int) -> int:
        return self._rng.randint(lo, hi)

    def randrange(self, n: int) -> int:
        return self._rng.randrange(n)

    def choice(self, seq):
        return self._rng.choice(seq)

    def sample(self, seq, k: int):
        return self._rng.sample(seq, k)

    def spawn(self, label: str, index: int = 0) -> "SceneRng":
        """Independent child stream; used to shard generation by record."""
        return SceneRng(derive_seed(self.seed, label, index))


@dataclass(frozen=True)
class GenConfig:
    """Knobs for scene sampling. Defaults match the benchmark's ranges."""

    min_shapes: int = 2
    max_shapes: int = 6
    dim_min: int = 2
    dim_max: int = 12
    grid_min: int = 3
    grid_max: int = 10
    require_unique_extremes: bool = True
    require_unique_largest: bool = True
    gr_mode: str = "total"  # "total" | "single"
    max_attempts: int = 1000

    def validate(self) -> None:
        if not (2 <= self.min_shapes <= self.max_shapes <= 6):
            raise ValueError("shape count range must satisfy 2 <= min <= max <= 6")
        if not (1 <= self.dim_min <= self.dim_max):
            raise ValueError("dimension range must satisfy 1 <= min <= max")
        if not (3 <= self.grid_min <= self.grid_max <= 10):
            raise ValueError("grid range must satisfy 3 <= min <= max <= 10")
        if self.gr_mode not in ("total", "single"):
            raise ValueError("gr_mode must be 'total' or 'single'")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be positive")


@dataclass(frozen=True)
class FreePlacement:
    shape: Shape
    x: int  # top-left of the shape's bounding box, px
    y: int


@dataclass(frozen=True)
class FreeScene:
    shapes: tuple[FreePlacement, ...]
    unit_scale: int
    target_index: int
    canvas: tuple[int, int] = (FREE_CANVAS, FREE_CANVAS)


@dataclass(frozen=True)
class GridPlacement:
    shape: Shape
    cell: tuple[int, int]  # (row, col), 1-based, row 1 at top


@dataclass(frozen=True)
class GridScene:
    grid_n: int
    placements: tuple[GridPlacement, ...]
    target_index: int
    cell_px: int = CELL_PX

    @property
    def canvas(self) -> tuple[int, int]:
        side = self.grid_n * self.cell_px
        return (side, side)


Scene = FreeScene | GridScene


def manhattan(a: tuple[int, int], b: tuple[int, int]) -> int:
    """|row delta| + |col delta| between two grid cells."""
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def _sample_dims(rng: SceneRng, cfg: GenConfig, kind: ShapeKind) -> tuple[int, ...]:
    fields = DIMENSION_FIELDS[kind]
    dims = [rng.randint(cfg.dim_min, cfg.dim_max) for _ in fields]
    # Rectangle sides and trapezoid bases must differ.
    if kind in (ShapeKind.RECTANGLE, ShapeKind.TRAPEZOID):
        while dims[1] == dims[0]:
            dims[1] = rng.randint(cfg.dim_min, cfg.dim_max)
    return tuple(dims)


def sample_shapes(rng: SceneRng, cfg: GenConfig, k: int) -> list[Shape]:
    """k shapes with pairwise-distinct colors."""
    colors = rng.sample(PALETTE, k)
    kinds = list(ShapeKind)
    if cfg.dim_min == cfg.dim_max:
        # Degenerate range cannot satisfy the distinct-dimension constraints.
        kinds = [ShapeKind.SQUARE, ShapeKind.RIGHT_TRIANGLE]
    shapes = []
    for i in range(k):
        kind = rng.choice(kinds)
        shapes.append(Shape(kind, _sample_dims(rng, cfg, kind), colors[i]))
    return shapes


def _unique_largest(shapes: list[Shape]) -> bool:
    areas = [area(s) for s in shapes]
    top = max(areas)
    return areas.count(top) == 1


def _try_place(
    rng: SceneRng, shapes: list[Shape], scale: int
) -> tuple[FreePlacement, ...] | None:
    boxes: list[tuple[int, int, int, int]] = []  # x, y, w, h
    placements = []
    for shape in shapes:
        wu, hu = unit_extent(shape)
        w, h = wu * scale, hu * scale
        lo = FREE_MARGIN
        hi_x = FREE_CANVAS - FREE_MARGIN - w
        hi_y = FREE_CANVAS - FREE_MARGIN - h
        if hi_x < lo or hi_y < lo:
            return None
        x = rng.randint(lo, hi_x)
        y = rng.randint(lo, hi_y)
        for bx, by, bw, bh in boxes:
            if (
                x < bx + bw + FREE_MARGIN
                and bx < x + w + FREE_MARGIN
                and y < by + bh + FREE_MARGIN
                and by < y + h + FREE_MARGIN
            ):
                return None
        boxes.append((x, y, w, h))
        placements.append(FreePlacement(shape, x, y))
    return tuple(placements)


def sample_free_scene(rng: SceneRng, cfg: GenConfig) -> FreeScene:
    """Free-layout scene: 2..6 shapes, distinct colors, non-overlapping boxes.

    Placement uses rejection sampling; when a scale level keeps failing the
    px-per-unit scale shrinks down the ladder. Raises GenerationExhausted
    once the attempt budget is spent.
    """
    cfg.validate()
    k = rng.randint(cfg.min_shapes, cfg.max_shapes)
    shapes = sample_shapes(rng, cfg, k)
    if cfg.require_unique_largest:
        for _ in range(100):
            if _unique_largest(shapes):
                break
            shapes = sample_shapes(rng, cfg, k)
        else:
            raise GenerationExhausted(
                "no shape set with a unique largest area after 100 resamples"
            )
    # Largest boxes first: placement succeeds far more often, and shape
    # order carries no meaning beyond rendering/enumeration order.
    shapes.sort(key=lambda s: (-area(s), s.color.name))
    per_scale = max(1, cfg.max_attempts // len(FREE_SCALE_LADDER))
    for scale in FREE_SCALE_LADDER:
        for _ in range(per_scale):
            placed = _try_place(rng, shapes, scale)
            if placed is not None:
                return FreeScene(
                    shapes=placed,
                    unit_scale=scale,
                    target_index=rng.randrange(k),
                )
    raise GenerationExhausted(
        f"no valid free placement for {k} shapes after {cfg.max_attempts} attempts"
    )


def _extremes_unique(scene: GridScene) -> bool:
    target_cell = scene.placements[scene.target_index].cell
    dists = [
        manhattan(target_cell, p.cell)
        for i, p in enumerate(scene.placements)
        if i != scene.target_index
    ]
    return dists.count(min(dists)) == 1 and dists.count(max(dists)) == 1


def sample_grid_scene(
    rng: SceneRng, cfg: GenConfig, require_unique_extremes: bool | None = None
) -> GridScene:
    """Grid scene with distinct occupied cells and a designated target.

    With unique extremes required (the default), resamples until both the
    nearest and the farthest non-target shape are unique by Manhattan
    distance, so spatial and compositional answers are well-posed.
    """
    cfg.validate()
    if require_unique_extremes is None:
        require_unique_extremes = cfg.require_unique_extremes
    inner = CELL_PX - 2 * GRID_CELL_PAD
    for _ in range(cfg.max_attempts):
        grid_n = rng.randint(cfg.grid_min, cfg.grid_max)
        k = rng.randint(cfg.min_shapes, min(cfg.max_shapes, grid_n * grid_n))
        shapes = sample_shapes(rng, cfg, k)
        if any(max(unit_extent(s)) > inner for s in shapes):
            raise GenerationExhausted(
                f"a shape exceeds the {inner}px usable cell interior at any scale"
            )
        cells = rng.sample(
            [(r, c) for r in range(1, grid_n + 1) for c in range(1, grid_n + 1)], k
        )
        scene = GridScene(
            grid_n=grid_n,
            placements=tuple(GridPlacement(s, cell) for s, cell in zip(shapes, cells)),
            target_index=rng.randrange(k),
        )
        if not require_unique_extremes or _extremes_unique(scene):
            return scene
    raise GenerationExhausted(
        f"no grid scene with unique extremes after {cfg.max_attempts} attempts"
    )


def grid_unit_scale(scene: GridScene) -> int:
    """px-per-unit for a grid scene: the largest integer scale fitting cells."""
    inner = scene.cell_px - 2 * GRID_CELL_PAD
    largest = max(max(unit_extent(p.shape)) for p in scene.placements)
    return max(1, min(12, inner // largest))


def scene_colors(scene: Scene) -> list[str]:
    if isinstance(scene, FreeScene):
        return [p.shape.color.name for p in scene.shapes]
    return [p.shape.color.name for p in scene.placements]


def scene_shapes(scene: Scene) -> list[Shape]:
    if isinstance(scene, FreeScene):
        return [p.shape for p in scene.shapes]
    return [p.shape for p in scene.placements]
