import io
import xml.etree.ElementTree as ET

import pytest
from PIL import Image

from shapebench.errors import RasterizeFailure
from shapebench.geometry import unit_extent
from shapebench.render import RenderSpec, rasterize, render_png, render_svg
from shapebench.scenes import (
    GenConfig,
    SceneRng,
    grid_unit_scale,
    sample_free_scene,
    sample_grid_scene,
)


def _shape_polygons(svg):
    root = ET.fromstring(svg)
    out = []
    for g in root.iter():
        if g.tag.endswith("g") and g.get("class") == "shape":
            poly = next(el for el in g if el.tag.endswith("polygon"))
            pts = [tuple(map(float, p.split(","))) for p in poly.get("points").split()]
            out.append((int(g.get("data-index")), pts))
    out.sort()
    return [pts for _, pts in out]


def _bbox(pts):
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    return min(xs), min(ys), max(xs), max(ys)


def test_grid_svg_has_grid_lines_per_axis():
    scene = sample_grid_scene(SceneRng(7), GenConfig(grid_min=3, grid_max=3))
    svg = render_svg(scene)
    root = ET.fromstring(svg)
    grid = next(g for g in root if g.get("class") == "grid")
    lines = [el for el in grid if el.tag.endswith("line")]
    horizontal = [l for l in lines if l.get("y1") == l.get("y2")]
    vertical = [l for l in lines if l.get("x1") == l.get("x2")]
    assert len(horizontal) == 4 and len(vertical) == 4


def test_square_labeled_twice():
    for seed in range(20):
        scene = sample_free_scene(SceneRng(seed), GenConfig())
        svg = render_svg(scene)
        root = ET.fromstring(svg)
        for g in root.iter():
            if g.tag.endswith("g") and g.get("class") == "shape" and g.get("data-kind") == "square":
                shape = scene.shapes[int(g.get("data-index"))].shape
                texts = [el.text for el in g if el.tag.endswith("text")]
                assert texts == [str(shape.dims[0])] * 2


def test_svg_byte_identical():
    scene = sample_free_scene(SceneRng(42), GenConfig())
    assert render_svg(scene) == render_svg(scene)
    grid = sample_grid_scene(SceneRng(42), GenConfig())
    assert render_svg(grid) == render_svg(grid)


def test_geometric_consistency_free_scene():
    """Labeled dimension / rendered extent == unit scale, within 1px."""
    for seed in range(15):
        scene = sample_free_scene(SceneRng(seed), GenConfig())
        polys = _shape_polygons(render_svg(scene))
        assert len(polys) == len(scene.shapes)
        for placement, pts in zip(scene.shapes, polys):
            wu, hu = unit_extent(placement.shape)
            x0, y0, x1, y1 = _bbox(pts)
            assert abs((x1 - x0) - wu * scene.unit_scale) <= 1
            assert abs((y1 - y0) - hu * scene.unit_scale) <= 1
            assert (x0, y0) == (placement.x, placement.y)


def test_geometric_consistency_grid_scene():
    for seed in range(15):
        scene = sample_grid_scene(SceneRng(seed), GenConfig())
        scale = grid_unit_scale(scene)
        polys = _shape_polygons(render_svg(scene))
        for placement, pts in zip(scene.placements, polys):
            wu, hu = unit_extent(placement.shape)
            x0, y0, x1, y1 = _bbox(pts)
            assert abs((x1 - x0) - wu * scale) <= 1
            assert abs((y1 - y0) - hu * scale) <= 1
            # centered within its cell
            row, col = placement.cell
            cx = (col - 1) * scene.cell_px + scene.cell_px / 2
            cy = (row - 1) * scene.cell_px + scene.cell_px / 2
            assert abs((x0 + x1) / 2 - cx) <= 1 and abs((y0 + y1) / 2 - cy) <= 1


def test_no_bounding_box_intersections():
    for seed in range(15):
        for scene in (
            sample_free_scene(SceneRng(seed), GenConfig()),
            sample_grid_scene(SceneRng(seed), GenConfig()),
        ):
            boxes = [_bbox(p) for p in _shape_polygons(render_svg(scene))]
            for i in range(len(boxes)):
                for j in range(i + 1, len(boxes)):
                    a, b = boxes[i], boxes[j]
                    overlap = a[0] < b[2] and b[0] < a[2] and a[1] < b[3] and b[1] < a[3]
                    assert not overlap


def test_png_dimensions_free():
    scene = sample_free_scene(SceneRng(1), GenConfig())
    img = Image.open(io.BytesIO(render_png(scene)))
    assert img.size == (512, 512)


def test_png_dimensions_grid_10():
    cfg = GenConfig(grid_min=10, grid_max=10)
    scene = sample_grid_scene(SceneRng(1), cfg)
    img = Image.open(io.BytesIO(render_png(scene)))
    assert img.size == (1000, 1000)


def test_background_corner_pixel():
    scene = sample_free_scene(SceneRng(1), GenConfig())
    img = Image.open(io.BytesIO(render_png(scene)))
    assert img.getpixel((0, 0)) == (255, 255, 255)


def test_png_bytes_deterministic():
    scene = sample_grid_scene(SceneRng(5), GenConfig())
    assert render_png(scene) == render_png(scene)


def test_shape_fill_color_appears():
    scene = sample_free_scene(SceneRng(3), GenConfig())
    img = Image.open(io.BytesIO(render_png(scene)))
    placement = scene.shapes[0]
    wu, hu = unit_extent(placement.shape)
    # probe a pixel inside the first shape (bottom-left region is filled for
    # every kind, including the right triangle)
    px = placement.x + 4
    py = placement.y + hu * scene.unit_scale - 5
    assert img.getpixel((px, py)) == placement.shape.color.rgb


def test_rasterize_rejects_malformed_svg():
    with pytest.raises(RasterizeFailure):
        rasterize("<svg><unclosed")
    with pytest.raises(RasterizeFailure):
        rasterize("<div/>")
    with pytest.raises(RasterizeFailure):
        rasterize('<svg xmlns="http://www.w3.org/2000/svg"><weird/></svg>')


def test_render_spec_overrides():
    scene = sample_free_scene(SceneRng(1), GenConfig())
    spec = RenderSpec(background="#000000")
    img = Image.open(io.BytesIO(render_png(scene, spec)))
    assert img.getpixel((0, 0)) == (0, 0, 0)
