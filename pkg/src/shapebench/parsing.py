"""Completion parsing: caption/think/answer block extraction and typed answers.

parse() never raises on arbitrary input — rewards must be able to score
garbage. Tags are matched strictly: lowercase, properly paired; an unclosed
tag counts as a missing block.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .tasks import Answer, AnswerKind, GridCell, IntegerArea

_TAGS = ("caption", "think", "answer")
_TAG_RE = {tag: re.compile(rf"<{tag}>(.*?)</{tag}>", re.DOTALL) for tag in _TAGS}
_NUMBER_RE = re.compile(r"\d+(?:\.\d+)?")
_CELL_RE = re.compile(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")


@dataclass(frozen=True)
class FormatFlags:
    has_think: bool
    has_answer: bool
    has_caption: bool
    blocks_in_order: bool
    no_stray_text: bool


@dataclass(frozen=True)
class ParsedCompletion:
    caption: str | None
    think: str | None
    answer_raw: str | None
    answer: Answer | None
    format_flags: FormatFlags


def extract_numbers(text: str) -> Counter:
    """Multiset of all decimal numeric literals in the text, as exact rationals.

    Tokens are unsigned; signs in arithmetic are treated as operators. Digits
    inside LaTeX-style fragments count like any others.
    """
    return Counter(Fraction(tok) for tok in _NUMBER_RE.findall(text))


def _extract_integer(raw: str) -> IntegerArea | None:
    # Last integer token wins; decimal literals like "4.5" are not integers.
    last = None
    for tok in _NUMBER_RE.findall(raw):
        if "." not in tok:
            last = tok
    return IntegerArea(int(last)) if last is not None else None


def _extract_cell(raw: str) -> GridCell | None:
    last = None
    for m in _CELL_RE.finditer(raw):
        last = m
    if last is None:
        return None
    return GridCell(int(last.group(1)), int(last.group(2)))


def parse(completion: str, expected: AnswerKind, mode: str = "standard") -> ParsedCompletion:
    """Decompose a completion into blocks and extract a typed answer.

    mode "rl_ground" additionally requires the caption block to precede the
    think block for blocks_in_order; "standard" only orders think < answer.
    """
    if mode not in ("standard", "rl_ground"):
        raise ValueError(f"unknown parse mode {mode!r}")
    text = completion if isinstance(completion, str) else str(completion)

    first = {tag: _TAG_RE[tag].search(text) for tag in _TAGS}
    caption = first["caption"].group(1) if first["caption"] else None
    think = first["think"].group(1) if first["think"] else None
    answer_raw = first["answer"].group(1) if first["answer"] else None

    has_caption = caption is not None
    has_think = think is not None
    has_answer = answer_raw is not None

    if has_think and has_answer:
        in_order = first["think"].start() < first["answer"].start()
        if mode == "rl_ground":
            in_order = (
                has_caption
                and first["caption"].start() < first["think"].start()
                and in_order
            )
    else:
        in_order = False

    stripped = text
    for tag in _TAGS:
        stripped = _TAG_RE[tag].sub("", stripped)
    no_stray = stripped.strip() == ""

    answer: Answer | None = None
    if answer_raw is not None:
        if expected is AnswerKind.INTEGER:
            answer = _extract_integer(answer_raw)
        else:
            answer = _extract_cell(answer_raw)

    return ParsedCompletion(
        caption=caption,
        think=think,
        answer_raw=answer_raw,
        answer=answer,
        format_flags=FormatFlags(
            has_think=has_think,
            has_answer=has_answer,
            has_caption=has_caption,
            blocks_in_order=in_order,
            no_stray_text=no_stray,
        ),
    )
