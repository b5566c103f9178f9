"""Shape primitives: the four kinds, their dimension schemas, colors, and areas.

All areas are exact rationals with denominator 1 or 2; rounding is half-up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction


class ShapeKind(str, Enum):
    SQUARE = "square"
    RECTANGLE = "rectangle"
    RIGHT_TRIANGLE = "right_triangle"
    TRAPEZOID = "trapezoid"

    @property
    def display_name(self) -> str:
        return self.value.replace("_", " ")


# Field order is fixed: it drives serialization, scene text, and trace text.
DIMENSION_FIELDS: dict[ShapeKind, tuple[str, ...]] = {
    ShapeKind.SQUARE: ("side",),
    ShapeKind.RECTANGLE: ("width", "height"),
    ShapeKind.RIGHT_TRIANGLE: ("leg_a", "leg_b"),
    ShapeKind.TRAPEZOID: ("base_a", "base_b", "height"),
}


@dataclass(frozen=True)
class Color:
    name: str
    rgb: tuple[int, int, int]


# Fixed 10-entry palette; names and rgb values are part of the data contract.
PALETTE: tuple[Color, ...] = (
    Color("red", (230, 25, 75)),
    Color("blue", (0, 130, 200)),
    Color("green", (60, 180, 75)),
    Color("yellow", (255, 225, 25)),
    Color("purple", (145, 30, 180)),
    Color("orange", (245, 130, 48)),
    Color("cyan", (70, 240, 240)),
    Color("magenta", (240, 50, 230)),
    Color("brown", (154, 99, 36)),
    Color("pink", (250, 190, 212)),
)

COLOR_BY_NAME: dict[str, Color] = {c.name: c for c in PALETTE}


@dataclass(frozen=True)
class Shape:
    """One geometric primitive with integer dimensions and a palette color.

    ``dims`` is ordered per DIMENSION_FIELDS[kind].
    """

    kind: ShapeKind
    dims: tuple[int, ...]
    color: Color

    def __post_init__(self):
        fields = DIMENSION_FIELDS[self.kind]
        if len(self.dims) != len(fields):
            raise ValueError(
                f"{self.kind.value} takes {len(fields)} dimensions, got {len(self.dims)}"
            )
        for name, value in zip(fields, self.dims):
            if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
                raise ValueError(f"{self.kind.value}.{name} must be a positive integer")
        if self.kind is ShapeKind.RECTANGLE and self.dims[0] == self.dims[1]:
            raise ValueError("rectangle with equal sides must be a square")
        if self.kind is ShapeKind.TRAPEZOID and self.dims[0] == self.dims[1]:
            raise ValueError("trapezoid bases must differ")

    @property
    def dims_named(self) -> dict[str, int]:
        return dict(zip(DIMENSION_FIELDS[self.kind], self.dims))

    def dim(self, name: str) -> int:
        return self.dims[DIMENSION_FIELDS[self.kind].index(name)]


def make_shape(kind: ShapeKind, color: Color, **dims: int) -> Shape:
    """Build a Shape from named dimensions, validating the schema."""
    fields = DIMENSION_FIELDS[kind]
    if set(dims) != set(fields):
        raise ValueError(f"{kind.value} needs dimensions {fields}, got {tuple(dims)}")
    return Shape(kind, tuple(dims[f] for f in fields), color)


def area(shape: Shape) -> Fraction:
    """Exact area in square units (denominator 1 or 2)."""
    d = shape.dims
    if shape.kind is ShapeKind.SQUARE:
        return Fraction(d[0] * d[0])
    if shape.kind is ShapeKind.RECTANGLE:
        return Fraction(d[0] * d[1])
    if shape.kind is ShapeKind.RIGHT_TRIANGLE:
        return Fraction(d[0] * d[1], 2)
    return Fraction((d[0] + d[1]) * d[2], 2)


def rounded_area(shape: Shape) -> int:
    """Area rounded half-up to the nearest integer."""
    return math.floor(area(shape) + Fraction(1, 2))


def format_exact(value: Fraction) -> str:
    """Render an exact area: integer, or one decimal for half-integers."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator / value.denominator:.1f}"


def area_formula_latex(shape: Shape) -> str:
    """Symbolic area formula with the shape's dimensions substituted.

    The right-hand side is the exact value, so the equation is always true;
    half-integers appear as decimals (e.g. ``= 4.5``).
    """
    d = shape.dims
    value = format_exact(area(shape))
    if shape.kind is ShapeKind.SQUARE:
        return f"{d[0]} \\times {d[0]} = {value}"
    if shape.kind is ShapeKind.RECTANGLE:
        return f"{d[0]} \\times {d[1]} = {value}"
    if shape.kind is ShapeKind.RIGHT_TRIANGLE:
        return f"\\frac{{{d[0]} \\times {d[1]}}}{{2}} = {value}"
    return f"\\frac{{({d[0]} + {d[1]})}}{{2}} \\times {d[2]} = {value}"


def unit_extent(shape: Shape) -> tuple[int, int]:
    """Width and height of the shape's bounding box in abstract units."""
    d = shape.dims
    if shape.kind is ShapeKind.SQUARE:
        return d[0], d[0]
    if shape.kind is ShapeKind.RECTANGLE:
        return d[0], d[1]
    if shape.kind is ShapeKind.RIGHT_TRIANGLE:
        return d[0], d[1]
    return max(d[0], d[1]), d[2]
