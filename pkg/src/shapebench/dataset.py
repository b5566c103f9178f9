"""Dataset serialization: line-delimited JSON manifests plus an image directory.

Every record embeds its full scene so any consumer can re-derive the answer
without vision; load_split re-checks that derivation. Field names are frozen
(schema v1) — external clients depend on them byte-for-byte.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .errors import AnswerMismatch, GenerationExhausted, ManifestCorrupt
from .geometry import COLOR_BY_NAME, DIMENSION_FIELDS, Shape, ShapeKind
from .render import RASTERIZER_ID, RenderSpec, DEFAULT_SPEC, rasterize, render_svg
from .scenes import (
    FreePlacement,
    FreeScene,
    GenConfig,
    GridPlacement,
    GridScene,
    Scene,
    SceneRng,
    derive_seed,
)
from .tasks import (
    Answer,
    EVAL_ONLY_CODES,
    GridCell,
    IntegerArea,
    ReferenceTrace,
    SubgoalFact,
    TaskCode,
    TaskInstance,
    ground_truth,
    make_instance,
)

SCHEMA_VERSION = 1


def canonical_json(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), sort_keys=False)


def config_digest(cfg: GenConfig) -> str:
    payload = json.dumps(cfg.__dict__, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def shape_to_json(shape: Shape) -> dict:
    return {
        "kind": shape.kind.value,
        "color": shape.color.name,
        "dims": shape.dims_named,
    }


def shape_from_json(obj: dict) -> Shape:
    kind = ShapeKind(obj["kind"])
    color = COLOR_BY_NAME[obj["color"]]
    dims = tuple(int(obj["dims"][f]) for f in DIMENSION_FIELDS[kind])
    return Shape(kind, dims, color)


def scene_to_json(scene: Scene) -> dict:
    if isinstance(scene, FreeScene):
        return {
            "type": "free",
            "canvas": list(scene.canvas),
            "unit_scale": scene.unit_scale,
            "target_index": scene.target_index,
            "shapes": [
                {**shape_to_json(p.shape), "anchor": [p.x, p.y]} for p in scene.shapes
            ],
        }
    return {
        "type": "grid",
        "grid_n": scene.grid_n,
        "cell_px": scene.cell_px,
        "target_index": scene.target_index,
        "placements": [
            {**shape_to_json(p.shape), "cell": list(p.cell)} for p in scene.placements
        ],
    }


def scene_from_json(obj: dict) -> Scene:
    if obj["type"] == "free":
        return FreeScene(
            shapes=tuple(
                FreePlacement(shape_from_json(s), int(s["anchor"][0]), int(s["anchor"][1]))
                for s in obj["shapes"]
            ),
            unit_scale=int(obj["unit_scale"]),
            target_index=int(obj["target_index"]),
            canvas=tuple(obj["canvas"]),
        )
    if obj["type"] == "grid":
        return GridScene(
            grid_n=int(obj["grid_n"]),
            placements=tuple(
                GridPlacement(shape_from_json(p), (int(p["cell"][0]), int(p["cell"][1])))
                for p in obj["placements"]
            ),
            target_index=int(obj["target_index"]),
            cell_px=int(obj["cell_px"]),
        )
    raise ValueError(f"unknown scene type {obj.get('type')!r}")


def answer_to_json(answer: Answer) -> dict:
    if isinstance(answer, IntegerArea):
        return {"type": "integer", "value": answer.value}
    return {"type": "cell", "row": answer.row, "col": answer.col}


def answer_from_json(obj: dict) -> Answer:
    if obj["type"] == "integer":
        return IntegerArea(int(obj["value"]))
    if obj["type"] == "cell":
        return GridCell(int(obj["row"]), int(obj["col"]))
    raise ValueError(f"unknown answer type {obj.get('type')!r}")


def subgoal_to_json(fact: SubgoalFact) -> dict:
    out = {"kind": fact.kind, "color": fact.color}
    if fact.value is not None:
        out["value"] = fact.value
    if fact.which is not None:
        out["which"] = fact.which
    return out


def trace_to_json(trace: ReferenceTrace) -> dict:
    return {
        "caption": trace.caption,
        "think": trace.think,
        "answer_text": trace.answer_text,
        "sft_target": trace.sft_target,
        "rlground_target": trace.rlground_target,
        "subgoals": [subgoal_to_json(s) for s in trace.subgoals],
    }


def trace_from_json(obj: dict) -> ReferenceTrace:
    return ReferenceTrace(
        caption=obj["caption"],
        think=obj["think"],
        answer_text=obj["answer_text"],
        subgoals=tuple(
            SubgoalFact(
                kind=s["kind"],
                color=s["color"],
                value=s.get("value"),
                which=s.get("which"),
            )
            for s in obj["subgoals"]
        ),
    )


def instance_to_json(instance: TaskInstance) -> dict:
    out = {
        "record_type": "task",
        "id": instance.id,
        "code": instance.code.value,
        "question": instance.question,
        "scene_text": instance.scene_text,
        "image_ref": instance.image_ref,
        "answer": answer_to_json(instance.answer),
        "trace": trace_to_json(instance.trace),
        "scene": scene_to_json(instance.scene),
    }
    if instance.gr_mode is not None:
        out["gr_mode"] = instance.gr_mode
    return out


def instance_from_json(obj: dict) -> TaskInstance:
    instance = TaskInstance(
        id=obj["id"],
        code=TaskCode(obj["code"]),
        question=obj["question"],
        scene_text=obj.get("scene_text"),
        image_ref=obj.get("image_ref"),
        answer=answer_from_json(obj["answer"]),
        trace=trace_from_json(obj["trace"]),
        scene=scene_from_json(obj["scene"]),
        gr_mode=obj.get("gr_mode"),
    )
    stored = obj["trace"]
    if stored["sft_target"] != instance.trace.sft_target:
        raise ValueError("sft_target does not match its caption/think/answer parts")
    if stored["rlground_target"] != instance.trace.rlground_target:
        raise ValueError("rlground_target does not match its parts")
    return instance


@dataclass
class ManifestHeader:
    code: TaskCode
    split: str
    n: int
    seed: int
    config_digest: str
    gr_mode: str
    schema_version: int = SCHEMA_VERSION
    benchmark_version: str = __version__
    rasterizer: str = RASTERIZER_ID

    def to_json(self) -> dict:
        return {
            "record_type": "header",
            "schema_version": self.schema_version,
            "benchmark_version": self.benchmark_version,
            "code": self.code.value,
            "split": self.split,
            "n": self.n,
            "seed": self.seed,
            "config_digest": self.config_digest,
            "gr_mode": self.gr_mode,
            "rasterizer": self.rasterizer,
        }


@dataclass
class DatasetManifest:
    header: ManifestHeader
    instances: list[TaskInstance]

    def by_id(self) -> dict[str, TaskInstance]:
        return {inst.id: inst for inst in self.instances}


def sample_scene_for(code: TaskCode, rng: SceneRng, cfg: GenConfig) -> Scene:
    from .scenes import sample_free_scene, sample_grid_scene

    if code.family == "GR":
        return sample_free_scene(rng, cfg)
    return sample_grid_scene(rng, cfg)


def _instance_id(code: TaskCode, split: str, index: int, scene: Scene) -> str:
    key = f"{code.value}|{split}|{index}|{canonical_json(scene_to_json(scene))}"
    return hashlib.blake2b(key.encode(), digest_size=8).hexdigest()


def generate_split(
    code: TaskCode,
    n: int,
    seed: int,
    cfg: GenConfig | None = None,
    split: str = "train",
    allow_train: bool = False,
) -> DatasetManifest:
    """Deterministically generate n task instances for one (code, split).

    Compositional and OOD codes are evaluation-only unless allow_train is
    set. Records are seeded per index, so generation can be sharded without
    changing output.
    """
    cfg = cfg or GenConfig()
    cfg.validate()
    if n < 1:
        raise ValueError("n must be >= 1")
    if split not in ("train", "eval"):
        raise ValueError("split must be 'train' or 'eval'")
    if split == "train" and code in EVAL_ONLY_CODES and not allow_train:
        raise ValueError(f"{code.value} is evaluation-only; pass allow_train to override")
    instances = []
    for i in range(n):
        rng = SceneRng(derive_seed(seed, f"{code.value}/{split}", i))
        try:
            scene = sample_scene_for(code, rng, cfg)
        except GenerationExhausted as exc:
            raise GenerationExhausted(f"record {i}: {exc}", index=i) from exc
        instance_id = _instance_id(code, split, i, scene)
        instances.append(
            make_instance(code, scene, instance_id, gr_mode=cfg.gr_mode)
        )
    header = ManifestHeader(
        code=code,
        split=split,
        n=n,
        seed=seed,
        config_digest=config_digest(cfg),
        gr_mode=cfg.gr_mode,
    )
    return DatasetManifest(header=header, instances=instances)


def write_manifest(
    manifest: DatasetManifest,
    out_dir: str | Path,
    spec: RenderSpec = DEFAULT_SPEC,
    write_png: bool = True,
) -> Path:
    """Write manifest.jsonl plus images/{id}.svg/.png for multimodal records.

    write_png=False skips rasterization (dry runs); the manifest bytes do not
    change, but validation with image checks will fail on such a tree.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest_path = out / "manifest.jsonl"
    images_dir = out / "images"
    if any(inst.code.is_multimodal for inst in manifest.instances):
        images_dir.mkdir(exist_ok=True)
    with open(manifest_path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(manifest.header.to_json()) + "\n")
        for inst in manifest.instances:
            fh.write(canonical_json(instance_to_json(inst)) + "\n")
            if inst.code.is_multimodal:
                svg = render_svg(inst.scene, spec)
                (images_dir / f"{inst.id}.svg").write_text(svg, encoding="utf-8")
                if write_png:
                    (images_dir / f"{inst.id}.png").write_bytes(rasterize(svg, spec))
    return manifest_path


def _revalidate(instance: TaskInstance, line: int) -> None:
    try:
        expected = ground_truth(instance.scene, instance.code, instance.gr_mode or "total")
    except Exception as exc:
        raise ManifestCorrupt(f"line {line}: scene is ill-posed: {exc}", line=line) from exc
    if expected != instance.answer:
        raise AnswerMismatch(
            f"line {line}: stored answer {answer_to_json(instance.answer)}"
            f" != derived {answer_to_json(expected)}",
            line=line,
        )


def load_split(
    path: str | Path,
    check_images: bool = True,
    verify_answers: bool = True,
) -> DatasetManifest:
    """Load and fully validate a manifest written by write_manifest.

    Raises ManifestCorrupt on schema/invariant violations (with the failing
    line number) and AnswerMismatch when a stored answer disagrees with the
    ground truth re-derived from the embedded scene.
    """
    path = Path(path)
    base = path.parent
    header = None
    instances: list[TaskInstance] = []
    seen_ids: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            if raw.strip() == "":
                raise ManifestCorrupt(f"line {line_no}: blank line", line=line_no)
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ManifestCorrupt(f"line {line_no}: bad JSON: {exc}", line=line_no) from exc
            if line_no == 1:
                if obj.get("record_type") != "header":
                    raise ManifestCorrupt("line 1: missing header record", line=1)
                if obj.get("schema_version") != SCHEMA_VERSION:
                    raise ManifestCorrupt(
                        f"unsupported schema_version {obj.get('schema_version')}", line=1
                    )
                header = ManifestHeader(
                    code=TaskCode(obj["code"]),
                    split=obj["split"],
                    n=int(obj["n"]),
                    seed=int(obj["seed"]),
                    config_digest=obj["config_digest"],
                    gr_mode=obj["gr_mode"],
                    schema_version=obj["schema_version"],
                    benchmark_version=obj["benchmark_version"],
                    rasterizer=obj["rasterizer"],
                )
                continue
            if obj.get("record_type") != "task":
                raise ManifestCorrupt(f"line {line_no}: not a task record", line=line_no)
            try:
                instance = instance_from_json(obj)
            except (KeyError, ValueError, TypeError, AttributeError, IndexError) as exc:
                raise ManifestCorrupt(f"line {line_no}: {exc}", line=line_no) from exc
            if instance.id in seen_ids:
                raise ManifestCorrupt(f"line {line_no}: duplicate id {instance.id}", line=line_no)
            seen_ids.add(instance.id)
            if instance.code != header.code:
                raise ManifestCorrupt(
                    f"line {line_no}: code {instance.code.value} != header {header.code.value}",
                    line=line_no,
                )
            if verify_answers:
                _revalidate(instance, line_no)
            if check_images and instance.image_ref is not None:
                if not (base / instance.image_ref).is_file():
                    raise ManifestCorrupt(
                        f"line {line_no}: missing image {instance.image_ref}", line=line_no
                    )
            instances.append(instance)
    if header is None:
        raise ManifestCorrupt("empty manifest", line=0)
    if len(instances) != header.n:
        raise ManifestCorrupt(
            f"header declares {header.n} records, found {len(instances)}",
            line=len(instances) + 1,
        )
    return DatasetManifest(header=header, instances=instances)
