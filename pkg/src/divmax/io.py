"""JSON instance files.

Layout::

    {"labels": ["a", "b", "c"],
     "distances": [[0, 1, 2], [1, 0, 1], [2, 1, 0]],
     "lambda": 1.0,
     "objective": {"type": "modular", "weights": [4, 1, 0]},
     "constraint": {"type": "uniform", "p": 2}}

``objective`` may also be ``{"type": "coverage", "topic_weights": [...],
"covers": [[...], ...]}`` and ``constraint`` may be ``{"type":
"partition", "parts": [[...], ...], "capacities": [...]}``.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from divmax.core import CoverageObjective, Instance, ModularObjective, SubmodularObjective, validate_semimetric
from divmax.errors import InvalidInstance
from divmax.matroid import matroid_from_dict


def objective_from_dict(spec: dict[str, Any]) -> SubmodularObjective:
    kind = spec.get("type")
    if kind == "modular":
        return ModularObjective(spec["weights"])
    if kind == "coverage":
        return CoverageObjective(spec["topic_weights"], spec["covers"])
    raise InvalidInstance(f"unknown objective type {kind!r}")


def instance_from_dict(data: dict[str, Any]) -> Instance:
    try:
        metric = validate_semimetric(data["distances"])
        objective = objective_from_dict(data["objective"])
        constraint = matroid_from_dict(data["constraint"])
        lam = data.get("lambda", 1.0)
        labels = tuple(data.get("labels") or ())
    except KeyError as exc:
        raise InvalidInstance(f"missing field {exc.args[0]!r}") from None
    except TypeError as exc:
        raise InvalidInstance(f"malformed instance: {exc}") from None
    return Instance(metric=metric, objective=objective, lam=lam, constraint=constraint, labels=labels)


def instance_to_dict(inst: Instance) -> dict[str, Any]:
    return {
        "labels": list(inst.labels),
        "distances": inst.metric.dist.tolist(),
        "lambda": inst.lam,
        "objective": inst.objective.to_dict(),
        "constraint": inst.constraint.to_dict(),
    }


def dumps_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), indent=1) + "\n"


def save_instance(inst: Instance, path: str | Path) -> None:
    Path(path).write_text(dumps_instance(inst))


def load_instance(path: str | Path) -> Instance:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidInstance(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise InvalidInstance(f"{path}: top level must be an object")
    return instance_from_dict(data)
