"""Reliability block diagrams of independent components.

A :class:`SystemModel` pairs named components with a series/parallel tree
(:class:`Leaf`, :class:`Series`, :class:`Parallel`). Each component must be
referenced exactly once in the tree, since the product formulas below are
only valid for independent blocks.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

import numpy as np

from linkrel import numerics
from linkrel.errors import HazardUndefinedError, ModelValidationError, UnknownComponentError
from linkrel.lifedist import LifeDistribution

__all__ = [
    "Component",
    "Leaf",
    "Series",
    "Parallel",
    "RbdNode",
    "SystemModel",
    "StateVariable",
    "find_violations",
    "validate",
    "system_survival",
    "system_pdf",
    "system_hazard",
    "failure_before",
    "with_retransmission",
    "is_series_only",
]

HAZARD_SURVIVAL_FLOOR = 1e-12
_CLAMP = 1e-12


@dataclass(frozen=True)
class Component:
    name: str
    dist: LifeDistribution


@dataclass(frozen=True)
class Leaf:
    name: str


@dataclass(frozen=True)
class Series:
    children: tuple

    def __init__(self, *children):
        if len(children) == 1 and isinstance(children[0], (list, tuple)):
            children = children[0]
        object.__setattr__(self, "children", tuple(children))


@dataclass(frozen=True)
class Parallel:
    children: tuple

    def __init__(self, *children):
        if len(children) == 1 and isinstance(children[0], (list, tuple)):
            children = children[0]
        object.__setattr__(self, "children", tuple(children))


RbdNode = Union[Leaf, Series, Parallel]


class StateVariable(int):
    """Operational state of a transmission: 1 working, 0 failed."""

    def __new__(cls, value: int):
        if value not in (0, 1):
            raise ValueError(f"state variable must be 0 or 1, got {value!r}")
        return super().__new__(cls, value)


@dataclass(frozen=True)
class SystemModel:
    components: tuple[Component, ...]
    structure: RbdNode

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))

    def component(self, name: str) -> Component:
        for c in self.components:
            if c.name == name:
                return c
        raise UnknownComponentError(name)

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.components]


def leaves(node: RbdNode) -> Iterator[str]:
    if isinstance(node, Leaf):
        yield node.name
    else:
        for child in node.children:
            yield from leaves(child)


def find_violations(model: SystemModel) -> list[str]:
    """Every structural problem in ``model``; empty when the model is valid."""
    problems: list[str] = []
    names = [c.name for c in model.components]
    for c in model.components:
        if not isinstance(c.name, str) or not c.name.strip():
            problems.append(f"invalid component name {c.name!r}")
        if not isinstance(c.dist, LifeDistribution):
            problems.append(f"component {c.name!r} has no life distribution")
    for name, count in Counter(names).items():
        if count > 1:
            problems.append(f"duplicate component name {name!r}")

    declared = set(names)
    refs: list[str] = []

    def walk(node, path: str) -> None:
        if isinstance(node, Leaf):
            refs.append(node.name)
            if node.name not in declared:
                problems.append(f"unknown component {node.name!r} at {path}")
        elif isinstance(node, Series):
            if len(node.children) < 1:
                problems.append(f"empty series group at {path}")
            for i, child in enumerate(node.children):
                walk(child, f"{path}/series[{i}]")
        elif isinstance(node, Parallel):
            if len(node.children) < 2:
                problems.append(
                    f"parallel group at {path} needs at least 2 branches, "
                    f"has {len(node.children)}"
                )
            for i, child in enumerate(node.children):
                walk(child, f"{path}/parallel[{i}]")
        else:
            problems.append(f"unrecognised node {node!r} at {path}")

    walk(model.structure, "root")
    for name, count in Counter(refs).items():
        if count > 1 and name in declared:
            problems.append(f"duplicate reference to component {name!r} ({count} times)")
    for name in names:
        if name not in refs and names.count(name) == 1:
            problems.append(f"component {name!r} is declared but never referenced")
    return problems


def validate(model: SystemModel) -> SystemModel:
    """Return ``model`` unchanged or raise with the full list of violations."""
    problems = find_violations(model)
    if problems:
        raise ModelValidationError(problems)
    return model


def is_series_only(node: RbdNode) -> bool:
    if isinstance(node, Leaf):
        return True
    if isinstance(node, Parallel):
        return False
    return all(is_series_only(c) for c in node.children)


def fold_survival(node: RbdNode, leaf_values: Mapping[str, np.ndarray]) -> np.ndarray:
    """Combine per-component survivals through the structure."""
    if isinstance(node, Leaf):
        return leaf_values[node.name]
    parts = [fold_survival(c, leaf_values) for c in node.children]
    if isinstance(node, Series):
        out = parts[0]
        for p in parts[1:]:
            out = out * p
        return out
    unrel = 1.0 - parts[0]
    for p in parts[1:]:
        unrel = unrel * (1.0 - p)
    return 1.0 - unrel


def _out(arr):
    arr = np.asarray(arr, dtype=float)
    return float(arr) if arr.ndim == 0 else arr


def component_survivals(model: SystemModel, t) -> dict[str, np.ndarray]:
    t = np.asarray(t, dtype=float)
    return {c.name: np.asarray(c.dist.survival(t), dtype=float) for c in model.components}


def system_survival(model: SystemModel, t, pinned: Mapping[str, float] | None = None):
    """System reliability ``R_w(t)``.

    ``pinned`` replaces the survival of the named components by a constant
    (1 for a perfect component, 0 for a failed one).
    """
    values = component_survivals(model, t)
    if pinned:
        for name, v in pinned.items():
            model.component(name)
            values[name] = np.full_like(values[name], float(v))
    return _out(np.clip(fold_survival(model.structure, values), 0.0, 1.0))


def _series_hazard(model: SystemModel, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    total = np.zeros_like(t)
    for name in leaves(model.structure):
        total = total + np.asarray(model.component(name).dist.hazard(t), dtype=float)
    return total


def _numeric_pdf(model: SystemModel, t):
    return -np.asarray(numerics.derivative(lambda x: system_survival(model, x), t))


def _clamp(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    return np.where(np.abs(values) < _CLAMP, 0.0, values)


def system_pdf(model: SystemModel, t, method: str = "auto"):
    """Density of the system TTTF, ``-dR_w/dt``.

    Series-only structures use ``R_w * sum(hazards)``; anything with a
    parallel group differentiates ``R_w`` numerically. ``method`` may force
    ``"analytic"`` (series-only) or ``"numeric"``.
    """
    if method == "auto":
        method = "analytic" if is_series_only(model.structure) else "numeric"
    if method == "analytic":
        if not is_series_only(model.structure):
            raise ValueError("analytic density requires a series-only structure")
        dens = np.asarray(system_survival(model, t)) * _series_hazard(model, t)
    elif method == "numeric":
        dens = _numeric_pdf(model, t)
    else:
        raise ValueError(f"unknown method {method!r}")
    return _out(np.maximum(_clamp(dens), 0.0))


def system_hazard(model: SystemModel, t, method: str = "auto"):
    """System failure rate ``f_w / R_w``.

    For series-only structures the default path is the sum of component
    hazards. The numeric path refuses points where ``R_w <= 1e-12``.
    """
    if method == "auto":
        method = "analytic" if is_series_only(model.structure) else "numeric"
    if method == "analytic":
        if not is_series_only(model.structure):
            raise ValueError("analytic hazard requires a series-only structure")
        return _out(_series_hazard(model, t))
    if method != "numeric":
        raise ValueError(f"unknown method {method!r}")
    arr = np.asarray(t, dtype=float)
    surv = np.asarray(system_survival(model, arr))
    low = surv <= HAZARD_SURVIVAL_FLOOR
    if np.any(low):
        raise HazardUndefinedError(
            float(arr[low].flat[0]),
            f"system hazard undefined at t={float(arr[low].flat[0])!r}: "
            f"survival {float(surv[low].flat[0])!r} below {HAZARD_SURVIVAL_FLOOR}",
        )
    dens = np.maximum(_clamp(_numeric_pdf(model, arr)), 0.0)
    return _out(dens / surv)


def failure_before(model: SystemModel, deadline):
    """Probability that the transmission fails before ``deadline``."""
    return _out(1.0 - np.asarray(system_survival(model, deadline)))


def _rename(node: RbdNode, suffix: str) -> RbdNode:
    if isinstance(node, Leaf):
        return Leaf(node.name + suffix)
    return type(node)(tuple(_rename(c, suffix) for c in node.children))


def with_retransmission(model: SystemModel, copies: int = 2) -> SystemModel:
    """Parallel redundancy over ``copies`` independent clones of ``model``.

    Component ``x`` in copy ``k`` (1-based) is renamed ``x@k``.
    """
    if isinstance(copies, bool) or int(copies) != copies or copies < 2:
        raise ValueError(f"copies must be an integer >= 2, got {copies!r}")
    validate(model)
    components = []
    branches = []
    for k in range(1, int(copies) + 1):
        suffix = f"@{k}"
        components.extend(Component(c.name + suffix, c.dist) for c in model.components)
        branches.append(_rename(model.structure, suffix))
    return SystemModel(tuple(components), Parallel(tuple(branches)))
