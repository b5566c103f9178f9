"""Independent brute-force oracles used to cross-check the library.

Everything here works on plain JSON records and plain integer arithmetic —
no shapebench internals — so agreement is meaningful evidence.
"""

from __future__ import annotations

import re
from fractions import Fraction


def oracle_area_x2(kind: str, dims: dict) -> int:
    """Twice the area, as an exact integer."""
    if kind == "square":
        return 2 * dims["side"] * dims["side"]
    if kind == "rectangle":
        return 2 * dims["width"] * dims["height"]
    if kind == "right_triangle":
        return dims["leg_a"] * dims["leg_b"]
    if kind == "trapezoid":
        return (dims["base_a"] + dims["base_b"]) * dims["height"]
    raise ValueError(kind)


def oracle_rounded(kind: str, dims: dict) -> int:
    """round_half_up(area) via integer math: floor((2a + 1) / 2)."""
    return (oracle_area_x2(kind, dims) + 1) // 2


def oracle_manhattan(a, b) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def _extreme_index(scene: dict, which: str) -> int:
    target_cell = scene["placements"][scene["target_index"]]["cell"]
    dists = {}
    for i, p in enumerate(scene["placements"]):
        if i == scene["target_index"]:
            continue
        dists[i] = oracle_manhattan(target_cell, p["cell"])
    best = min(dists.values()) if which == "nearest" else max(dists.values())
    hits = [i for i, d in dists.items() if d == best]
    assert len(hits) == 1, f"{which} tie at distance {best}"
    return hits[0]


def oracle_answer(record: dict) -> dict:
    """Re-derive a task record's answer from its embedded scene."""
    code = record["code"]
    scene = record["scene"]
    family = code.split("_")[1]
    ood = code.endswith("_OOD")
    if family == "GR":
        shapes = scene["shapes"]
        if ood:
            doubled = [oracle_area_x2(s["kind"], s["dims"]) for s in shapes]
            top = max(doubled)
            assert doubled.count(top) == 1, "largest-area tie"
            winner = shapes[doubled.index(top)]
            return {"type": "integer", "value": oracle_rounded(winner["kind"], winner["dims"])}
        if record.get("gr_mode") == "single":
            s = shapes[scene["target_index"]]
            return {"type": "integer", "value": oracle_rounded(s["kind"], s["dims"])}
        return {
            "type": "integer",
            "value": sum(oracle_rounded(s["kind"], s["dims"]) for s in shapes),
        }
    if family == "SR":
        idx = _extreme_index(scene, "farthest" if ood else "nearest")
        row, col = scene["placements"][idx]["cell"]
        return {"type": "cell", "row": row, "col": col}
    # COMP
    target = scene["placements"][scene["target_index"]]
    t_area = oracle_rounded(target["kind"], target["dims"])
    if ood:
        other = scene["placements"][_extreme_index(scene, "farthest")]
        o_area = oracle_rounded(other["kind"], other["dims"])
        return {"type": "integer", "value": max(t_area, o_area)}
    other = scene["placements"][_extreme_index(scene, "nearest")]
    o_area = oracle_rounded(other["kind"], other["dims"])
    return {"type": "integer", "value": t_area + o_area}


_FRAC_RE = re.compile(r"\\frac\{([^{}]*)\}\{([^{}]*)\}")
_ABS_RE = re.compile(r"\|(\d+) - (\d+)\|")


def eval_latex(expr: str) -> Fraction:
    """Evaluate a LaTeX-style arithmetic fragment with exact rationals."""
    expr = expr.replace("\\times", "*")
    while True:
        m = _FRAC_RE.search(expr)
        if m is None:
            break
        expr = f"{expr[:m.start()]}(Fraction({m.group(1)}) / ({m.group(2)})){expr[m.end():]}"
    return Fraction(eval(expr, {"__builtins__": {}}, {"Fraction": Fraction}))


def round_half_up(value: Fraction) -> int:
    return int((2 * value + 1) // 2)


_SCENE_HEAD_RE = re.compile(r"^There are (\d+) shapes(?: on a (\d+) by (\d+) grid)?\.")
_SHAPE_RE = re.compile(
    r"A (\w+) (square|rectangle|right triangle|trapezoid) with ([^.]*?)"
    r"(?: at cell \((\d+), (\d+)\))?\."
)


def parse_scene_text(text: str) -> dict:
    """Recover shape kinds, dims, and cells from a scene description."""
    head = _SCENE_HEAD_RE.match(text)
    assert head, f"bad scene text head: {text[:60]!r}"
    shapes = []
    for m in _SHAPE_RE.finditer(text):
        color, kind_words, dims_text, row, col = m.groups()
        kind = kind_words.replace(" ", "_")
        if kind == "square":
            dm = re.fullmatch(r"side (\d+) units", dims_text)
            dims = {"side": int(dm.group(1))}
        elif kind == "rectangle":
            dm = re.fullmatch(r"width (\d+) units and height (\d+) units", dims_text)
            dims = {"width": int(dm.group(1)), "height": int(dm.group(2))}
        elif kind == "right_triangle":
            dm = re.fullmatch(r"legs (\d+) and (\d+) units", dims_text)
            dims = {"leg_a": int(dm.group(1)), "leg_b": int(dm.group(2))}
        else:
            dm = re.fullmatch(r"bases (\d+) and (\d+) units and height (\d+) units", dims_text)
            dims = {"base_a": int(dm.group(1)), "base_b": int(dm.group(2)), "height": int(dm.group(3))}
        entry = {"color": color, "kind": kind, "dims": dims}
        if row is not None:
            entry["cell"] = [int(row), int(col)]
        shapes.append(entry)
    assert len(shapes) == int(head.group(1))
    out = {"shapes": shapes}
    if head.group(2) is not None:
        assert head.group(2) == head.group(3)
        out["grid_n"] = int(head.group(2))
    return out


def verify_think_arithmetic(think: str) -> int | None:
    """Re-evaluate every arithmetic claim in a reference think text.

    Returns the final integer value the trace derives (None for SR traces,
    whose conclusion is a cell). Raises AssertionError on any false claim.
    """
    # Split on sentence-ending periods only; decimals like 25.5 stay intact.
    sentences = [s.strip() for s in re.split(r"\.(?=\s|$)", think) if s.strip()]
    rounded_areas: dict[str, int] = {}
    distances: dict[str, int] = {}
    final_value: int | None = None
    for s in sentences:
        if " has area " in s:
            head, rest = s.split(" has area ", 1)
            color = head.split()[1]
            rounded_claim = None
            if ", rounded to " in rest:
                rest, rtxt = rest.split(", rounded to ")
                rounded_claim = int(rtxt)
            lhs, rhs = rest.rsplit(" = ", 1)
            value = eval_latex(lhs)
            assert value == Fraction(rhs), f"area formula false: {s}"
            rounded = round_half_up(value)
            if rounded_claim is not None:
                assert value.denominator == 2 and rounded == rounded_claim, s
            else:
                assert value.denominator == 1, s
            rounded_areas[color] = rounded
        elif s.startswith("Distance to"):
            color = s.split("Distance to the ", 1)[1].split()[0]
            expr, rhs = s.split(": ", 1)[1].rsplit(" = ", 1)
            expr = _ABS_RE.sub(lambda m: str(abs(int(m.group(1)) - int(m.group(2)))), expr)
            assert eval_latex(expr) == int(rhs), f"distance claim false: {s}"
            distances[color] = int(rhs)
        elif s.startswith("The nearest shape is") or s.startswith("The farthest shape is"):
            which = "nearest" if "nearest" in s else "farthest"
            color = s.split(" is the ", 1)[1].split()[0]
            pick = min if which == "nearest" else max
            assert distances, "extreme claim before any distances"
            assert distances[color] == pick(distances.values()), f"wrong extreme: {s}"
        elif s.startswith("Total area:") or s.startswith("Combined area:"):
            expr, rhs = s.split(": ", 1)[1].rsplit(" = ", 1)
            assert eval_latex(expr) == int(rhs), f"sum claim false: {s}"
            final_value = int(rhs)
        elif s.startswith("Comparing the areas, the largest is"):
            value = int(s.rsplit(" with area ", 1)[1])
            assert rounded_areas and value == max(rounded_areas.values()), s
            final_value = value
        elif s.startswith("Comparing "):
            m = re.fullmatch(r"Comparing (\d+) and (\d+), the larger area is (\d+)", s)
            assert m, s
            assert int(m.group(3)) == max(int(m.group(1)), int(m.group(2))), s
            final_value = int(m.group(3))
        elif s.startswith("The area of the "):
            final_value = int(s.rsplit(" is ", 1)[1])
            color = s.split("The area of the ", 1)[1].split()[0]
            assert rounded_areas.get(color) == final_value, s
    return final_value
