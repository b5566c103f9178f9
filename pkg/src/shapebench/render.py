"""Scene rendering: deterministic SVG as the source of truth, PNG as an export.

The SVG uses a small fixed element set (rect, line, polygon, text) so the
bundled rasterizer can draw it with Pillow and tests can parse geometry back
without image diffing. PNG bytes are deterministic for a pinned Pillow
version; manifests record that identity.
"""

from __future__ import annotations

import io
import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass

import PIL
from PIL import Image, ImageDraw, ImageFont

from .errors import RasterizeFailure
from .geometry import Shape, ShapeKind, unit_extent
from .scenes import FreeScene, GridScene, Scene, grid_unit_scale

RASTERIZER_ID = f"pillow-{PIL.__version__}"


@dataclass(frozen=True)
class RenderSpec:
    stroke_width: int = 2
    font_size: int = 16
    background: str = "#ffffff"
    grid_color: str = "#cccccc"
    label_color: str = "#000000"


DEFAULT_SPEC = RenderSpec()

# Label offsets, px.
_BELOW = 18
_ABOVE = 6
_BESIDE = 6


def _fmt(v: float) -> str:
    """Fixed decimal formatting: integers stay bare, halves keep one digit."""
    if float(v).is_integer():
        return str(int(v))
    return f"{v:.2f}".rstrip("0")


def _rgb(color: tuple[int, int, int]) -> str:
    return f"rgb({color[0]},{color[1]},{color[2]})"


def _polygon_points(shape: Shape, x: float, y: float, scale: float) -> list[tuple[float, float]]:
    """Vertices in px for a shape whose bounding box starts at (x, y)."""
    d = shape.dims
    wu, hu = unit_extent(shape)
    w, h = wu * scale, hu * scale
    if shape.kind in (ShapeKind.SQUARE, ShapeKind.RECTANGLE):
        return [(x, y), (x + w, y), (x + w, y + h), (x, y + h)]
    if shape.kind is ShapeKind.RIGHT_TRIANGLE:
        # Right angle at the bottom-left corner; legs along the axes.
        return [(x, y + h), (x + w, y + h), (x, y)]
    # Isosceles trapezoid: base_a at the bottom, base_b at the top, centered.
    a, b = d[0] * scale, d[1] * scale
    return [
        (x + (w - a) / 2, y + h),
        (x + (w + a) / 2, y + h),
        (x + (w + b) / 2, y),
        (x + (w - b) / 2, y),
    ]


def _text(x: float, y: float, content: str, spec: RenderSpec, anchor: str = "middle",
          baseline: str | None = None) -> str:
    attrs = (
        f'x="{_fmt(x)}" y="{_fmt(y)}" font-family="sans-serif"'
        f' font-size="{spec.font_size}" fill="{spec.label_color}"'
        f' text-anchor="{anchor}"'
    )
    if baseline:
        attrs += f' dominant-baseline="{baseline}"'
    return f"<text {attrs}>{content}</text>"


def _shape_group(shape: Shape, x: float, y: float, scale: float, index: int,
                 spec: RenderSpec) -> str:
    d = shape.dims
    wu, hu = unit_extent(shape)
    w, h = wu * scale, hu * scale
    pts = " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in _polygon_points(shape, x, y, scale))
    parts = [
        f'<g class="shape" data-index="{index}" data-kind="{shape.kind.value}">',
        f'<polygon points="{pts}" fill="{_rgb(shape.color.rgb)}"'
        f' stroke="#000000" stroke-width="{spec.stroke_width}"/>',
    ]
    cx = x + w / 2
    if shape.kind is ShapeKind.SQUARE:
        parts.append(_text(cx, y + h + _BELOW, str(d[0]), spec))
        parts.append(_text(x + w + _BESIDE, y + h / 2, str(d[0]), spec, "start", "central"))
    elif shape.kind is ShapeKind.RECTANGLE:
        parts.append(_text(cx, y + h + _BELOW, str(d[0]), spec))
        parts.append(_text(x + w + _BESIDE, y + h / 2, str(d[1]), spec, "start", "central"))
    elif shape.kind is ShapeKind.RIGHT_TRIANGLE:
        parts.append(_text(cx, y + h + _BELOW, str(d[0]), spec))
        parts.append(_text(x - _BESIDE, y + h / 2, str(d[1]), spec, "end", "central"))
    else:  # trapezoid: both bases plus a dashed height marker
        parts.append(_text(cx, y + h + _BELOW, str(d[0]), spec))
        parts.append(_text(cx, y - _ABOVE, str(d[1]), spec))
        parts.append(
            f'<line x1="{_fmt(cx)}" y1="{_fmt(y)}" x2="{_fmt(cx)}" y2="{_fmt(y + h)}"'
            f' stroke="#000000" stroke-width="1" stroke-dasharray="4 3"/>'
        )
        parts.append(_text(cx + _BESIDE, y + h / 2, str(d[2]), spec, "start", "central"))
    parts.append("</g>")
    return "".join(parts)


def render_svg(scene: Scene, spec: RenderSpec = DEFAULT_SPEC) -> str:
    """Deterministic SVG document: byte-identical for equal (scene, spec)."""
    width, height = scene.canvas
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}"'
        f' viewBox="0 0 {width} {height}">',
        f'<rect class="bg" x="0" y="0" width="{width}" height="{height}"'
        f' fill="{spec.background}"/>',
    ]
    if isinstance(scene, GridScene):
        n, cell = scene.grid_n, scene.cell_px
        grid_lines = []
        for i in range(n + 1):
            p = i * cell
            grid_lines.append(
                f'<line x1="0" y1="{p}" x2="{width}" y2="{p}"'
                f' stroke="{spec.grid_color}" stroke-width="1"/>'
            )
        for i in range(n + 1):
            p = i * cell
            grid_lines.append(
                f'<line x1="{p}" y1="0" x2="{p}" y2="{height}"'
                f' stroke="{spec.grid_color}" stroke-width="1"/>'
            )
        parts.append(f'<g class="grid">{"".join(grid_lines)}</g>')
        scale = grid_unit_scale(scene)
        for i, placement in enumerate(scene.placements):
            row, col = placement.cell
            wu, hu = unit_extent(placement.shape)
            w, h = wu * scale, hu * scale
            x = (col - 1) * cell + (cell - w) / 2
            y = (row - 1) * cell + (cell - h) / 2
            parts.append(_shape_group(placement.shape, x, y, scale, i, spec))
    else:
        for i, placement in enumerate(scene.shapes):
            parts.append(
                _shape_group(placement.shape, placement.x, placement.y, scene.unit_scale, i, spec)
            )
    parts.append("</svg>")
    return "".join(parts)


_ANCHOR_H = {"start": "l", "middle": "m", "end": "r"}
_BASELINE_V = {None: "s", "central": "m"}


def _parse_points(text: str) -> list[tuple[float, float]]:
    pts = []
    for pair in text.split():
        xs, ys = pair.split(",")
        pts.append((float(xs), float(ys)))
    return pts


def _parse_color(value: str) -> tuple[int, int, int]:
    if value.startswith("#"):
        return tuple(int(value[i : i + 2], 16) for i in (1, 3, 5))
    if value.startswith("rgb(") and value.endswith(")"):
        return tuple(int(v) for v in value[4:-1].split(","))
    raise RasterizeFailure(f"unsupported color literal {value!r}")


def _draw_dashed(draw: ImageDraw.ImageDraw, p1, p2, dashes: list[float], fill, width: int):
    dx, dy = p2[0] - p1[0], p2[1] - p1[1]
    length = math.hypot(dx, dy)
    if length == 0:
        return
    ux, uy = dx / length, dy / length
    pos, i, on = 0.0, 0, True
    while pos < length:
        seg = min(dashes[i % len(dashes)], length - pos)
        if on:
            draw.line(
                [(p1[0] + ux * pos, p1[1] + uy * pos),
                 (p1[0] + ux * (pos + seg), p1[1] + uy * (pos + seg))],
                fill=fill,
                width=width,
            )
        pos += seg
        i += 1
        on = not on


def _draw_element(el: ET.Element, draw: ImageDraw.ImageDraw, spec: RenderSpec):
    tag = el.tag.split("}")[-1]
    if tag == "g":
        for child in el:
            _draw_element(child, draw, spec)
    elif tag == "rect":
        x, y = float(el.get("x", "0")), float(el.get("y", "0"))
        w, h = float(el.get("width")), float(el.get("height"))
        draw.rectangle([x, y, x + w - 1, y + h - 1], fill=_parse_color(el.get("fill")))
    elif tag == "line":
        p1 = (float(el.get("x1")), float(el.get("y1")))
        p2 = (float(el.get("x2")), float(el.get("y2")))
        color = _parse_color(el.get("stroke"))
        width = int(float(el.get("stroke-width", "1")))
        dash = el.get("stroke-dasharray")
        if dash:
            _draw_dashed(draw, p1, p2, [float(v) for v in dash.split()], color, width)
        else:
            draw.line([p1, p2], fill=color, width=width)
    elif tag == "polygon":
        pts = _parse_points(el.get("points"))
        draw.polygon(
            pts,
            fill=_parse_color(el.get("fill")),
            outline=_parse_color(el.get("stroke", "#000000")),
            width=int(float(el.get("stroke-width", "1"))),
        )
    elif tag == "text":
        size = int(float(el.get("font-size", str(spec.font_size))))
        font = ImageFont.load_default(size=size)
        anchor = _ANCHOR_H[el.get("text-anchor", "start")] + _BASELINE_V[el.get("dominant-baseline")]
        draw.text(
            (float(el.get("x")), float(el.get("y"))),
            el.text or "",
            font=font,
            fill=_parse_color(el.get("fill", "#000000")),
            anchor=anchor,
        )
    else:
        raise RasterizeFailure(f"unsupported SVG element <{tag}>")


def rasterize(svg: str, spec: RenderSpec = DEFAULT_SPEC) -> bytes:
    """Rasterize a render_svg document to PNG bytes."""
    try:
        root = ET.fromstring(svg)
    except ET.ParseError as exc:
        raise RasterizeFailure(f"malformed SVG: {exc}") from exc
    if root.tag.split("}")[-1] != "svg":
        raise RasterizeFailure("root element is not <svg>")
    try:
        width, height = int(root.get("width")), int(root.get("height"))
    except (TypeError, ValueError) as exc:
        raise RasterizeFailure("missing integer width/height") from exc
    image = Image.new("RGB", (width, height), _parse_color(spec.background))
    draw = ImageDraw.Draw(image)
    for el in root:
        _draw_element(el, draw, spec)
    buf = io.BytesIO()
    image.save(buf, format="PNG", compress_level=1)
    return buf.getvalue()


def render_png(scene: Scene, spec: RenderSpec = DEFAULT_SPEC) -> bytes:
    return rasterize(render_svg(scene, spec), spec)
