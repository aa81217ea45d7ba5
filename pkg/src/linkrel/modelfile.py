"""JSON model files: parsing, validation and canonical export.

Schema::

    {
      "components": [
        {"name": "pathloss",
         "distribution": {"family": "exponential", "parameters": {"rate": 1.0}}},
        {"name": "shadowing",
         "distribution": {"family": "lognormal", "moments": {"mean": ..., "variance": ...}}}
      ],
      "structure": {"series": ["pathloss", {"parallel": ["a", "b"]}]},
      "grid": {"t_max": 5.0, "steps": 500},        # optional
      "deadlines": [0.5, 1.0, 2.0],                # optional
      "retransmissions": 0                         # optional
    }

A leaf is a component name; groups are single-key objects. Distributions
give either ``parameters`` or ``moments``; moments are inverted at load.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any

from linkrel.errors import ModelValidationError, ReliabilityError
from linkrel.lifedist import FAMILIES, Kind, LifeDistribution, Moments, from_moments
from linkrel.numerics import Grid
from linkrel.rbd import Component, Leaf, Parallel, RbdNode, Series, SystemModel, find_violations

__all__ = ["ModelSpec", "parse_model", "load_model", "dump_model", "to_dict", "bundled_model_path"]

_PARAM_KEYS = {
    Kind.EXPONENTIAL: ("rate",),
    Kind.LOGNORMAL: ("mu", "sigma"),
    Kind.RAYLEIGH: ("scale",),
}


@dataclass(frozen=True)
class ModelSpec:
    """A parsed model file: the system plus optional analysis settings."""

    model: SystemModel
    grid: Grid | None = None
    deadlines: tuple[float, ...] | None = None
    retransmissions: int | None = None


def bundled_model_path() -> Path:
    """Path of the shipped pathloss/shadowing/multipath series model."""
    return Path(str(resources.files("linkrel") / "data" / "fading_link.json"))


def _number(value: Any, where: str, problems: list[str]) -> float | None:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        problems.append(f"{where}: expected a number, got {value!r}")
        return None
    if not math.isfinite(value):
        problems.append(f"{where}: must be finite, got {value!r}")
        return None
    return float(value)


def _parse_distribution(raw: Any, where: str, problems: list[str]) -> LifeDistribution | None:
    if not isinstance(raw, dict):
        problems.append(f"{where}: distribution must be an object")
        return None
    try:
        kind = Kind(str(raw.get("family", "")).lower())
    except ValueError:
        problems.append(
            f"{where}: unknown family {raw.get('family')!r} "
            f"(expected one of {', '.join(k.value for k in Kind)})"
        )
        return None
    has_params, has_moments = "parameters" in raw, "moments" in raw
    if has_params == has_moments:
        problems.append(f"{where}: give exactly one of 'parameters' or 'moments'")
        return None
    extra = set(raw) - {"family", "parameters", "moments"}
    if extra:
        problems.append(f"{where}: unexpected keys {sorted(extra)}")

    key = "parameters" if has_params else "moments"
    block = raw[key]
    expected = _PARAM_KEYS[kind] if has_params else ("mean", "variance")
    if not isinstance(block, dict) or set(block) != set(expected):
        problems.append(f"{where}.{key}: expected keys {list(expected)} for {kind.value}")
        return None
    values = {k: _number(block[k], f"{where}.{key}.{k}", problems) for k in expected}
    if any(v is None for v in values.values()):
        return None
    try:
        if has_params:
            return FAMILIES[kind](**values)
        return from_moments(kind, Moments(values["mean"], values["variance"]))
    except ReliabilityError as exc:
        problems.append(f"{where}: {exc}")
        return None


def _parse_node(raw: Any, where: str, problems: list[str]) -> RbdNode | None:
    if isinstance(raw, str):
        return Leaf(raw)
    if isinstance(raw, dict) and len(raw) == 1:
        (kind, children), = raw.items()
        if kind in ("series", "parallel") and isinstance(children, list):
            parsed = [_parse_node(c, f"{where}.{kind}[{i}]", problems) for i, c in enumerate(children)]
            if any(p is None for p in parsed):
                return None
            return (Series if kind == "series" else Parallel)(tuple(parsed))
    problems.append(
        f"{where}: a node must be a component name or {{'series'|'parallel': [...]}}, got {raw!r}"
    )
    return None


def parse_model(data: Any) -> ModelSpec:
    """Build a validated :class:`ModelSpec` from decoded JSON.

    Raises :class:`ModelValidationError` listing every problem found.
    """
    problems: list[str] = []
    if not isinstance(data, dict):
        raise ModelValidationError(["model file must contain a JSON object"])
    extra = set(data) - {"components", "structure", "grid", "deadlines", "retransmissions"}
    if extra:
        problems.append(f"unexpected top-level keys {sorted(extra)}")

    components: list[Component] = []
    broken: set[str] = set()  # names whose distribution failed to parse
    raw_components = data.get("components")
    if not isinstance(raw_components, list) or not raw_components:
        problems.append("'components' must be a non-empty list")
        raw_components = []
    for i, entry in enumerate(raw_components):
        where = f"components[{i}]"
        if not isinstance(entry, dict) or set(entry) != {"name", "distribution"}:
            problems.append(f"{where}: expected an object with 'name' and 'distribution'")
            continue
        name = entry["name"]
        if not isinstance(name, str) or not name.strip():
            problems.append(f"{where}: name must be a non-empty string")
            continue
        dist = _parse_distribution(entry["distribution"], f"{where} ({name})", problems)
        if dist is None:
            broken.add(name)
        else:
            components.append(Component(name, dist))

    structure = None
    if "structure" not in data:
        problems.append("'structure' is required")
    else:
        structure = _parse_node(data["structure"], "structure", problems)

    grid = None
    if "grid" in data:
        raw = data["grid"]
        if not isinstance(raw, dict) or set(raw) != {"t_max", "steps"}:
            problems.append("grid: expected an object with 't_max' and 'steps'")
        else:
            try:
                grid = Grid(raw["t_max"], raw["steps"])
            except (ValueError, TypeError) as exc:
                problems.append(f"grid: {exc}")

    deadlines = None
    if "deadlines" in data:
        raw = data["deadlines"]
        if not isinstance(raw, list):
            problems.append("deadlines: expected a list of times")
        else:
            vals = [_number(v, f"deadlines[{i}]", problems) for i, v in enumerate(raw)]
            if any(v is not None and v < 0 for v in vals):
                problems.append("deadlines: times must be >= 0")
            deadlines = tuple(v for v in vals if v is not None)

    retrans = None
    if "retransmissions" in data:
        raw = data["retransmissions"]
        if isinstance(raw, bool) or not isinstance(raw, int) or raw < 0:
            problems.append(f"retransmissions: expected an integer >= 0, got {raw!r}")
        else:
            retrans = raw

    if structure is not None:
        model = SystemModel(tuple(components), structure)
        problems.extend(
            p for p in find_violations(model)
            if not any(p.startswith(f"unknown component {n!r} ") for n in broken)
        )
    if problems:
        raise ModelValidationError(problems)
    return ModelSpec(model, grid, deadlines, retrans)


def load_model(path: str | Path) -> ModelSpec:
    """Read and parse a model file. ``OSError`` propagates for I/O failures."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelValidationError([f"{path}: invalid JSON: {exc}"]) from exc
    return parse_model(data)


def _node_to_json(node: RbdNode) -> Any:
    if isinstance(node, Leaf):
        return node.name
    key = "series" if isinstance(node, Series) else "parallel"
    return {key: [_node_to_json(c) for c in node.children]}


def to_dict(spec: ModelSpec) -> dict:
    """Canonical form: distributions always in parameter form."""
    out: dict[str, Any] = {
        "components": [
            {
                "name": c.name,
                "distribution": {"family": c.dist.kind.value, "parameters": dict(c.dist.params)},
            }
            for c in spec.model.components
        ],
        "structure": _node_to_json(spec.model.structure),
    }
    if spec.grid is not None:
        out["grid"] = {"t_max": spec.grid.t_max, "steps": spec.grid.steps}
    if spec.deadlines is not None:
        out["deadlines"] = list(spec.deadlines)
    if spec.retransmissions is not None:
        out["retransmissions"] = spec.retransmissions
    return out


def dump_model(spec: ModelSpec) -> str:
    return json.dumps(to_dict(spec), indent=2) + "\n"
