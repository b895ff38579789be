"""Capacity-health scoring for Clos datacenter fabrics.

The numeric functions come straight from the C++ core. Document-level
functions exchange the same JSON formats as the ``ansc`` CLI; the wrappers
below decode them into plain Python objects.
"""

import json

from . import _core
from ._core import (
    AnscError,
    ConfigError,
    ConflictError,
    DomainError,
    NotFoundError,
    ParseError,
    PreconditionError,
    ValidationError,
    assign_colors,
    effective_safety_margin,
    layer_loss_distribution,
    map_color,
    persistence_adjust,
    posture_and_movement,
    raw_score,
    split_common_cause,
    violation_probability,
)

__all__ = [
    "AnscError",
    "ConfigError",
    "ConflictError",
    "DomainError",
    "NotFoundError",
    "ParseError",
    "PreconditionError",
    "ValidationError",
    "assign_colors",
    "audit",
    "calibrate",
    "effective_safety_margin",
    "generate_fleet",
    "generate_incidents",
    "layer_loss_distribution",
    "map_color",
    "persistence_adjust",
    "posture_and_movement",
    "raw_score",
    "run_scenario",
    "score",
    "split_common_cause",
    "violation_probability",
    "whatif",
]


def _dumps(obj):
    if obj is None:
        return ""
    return obj if isinstance(obj, str) else json.dumps(obj)


def generate_fleet(spec=None):
    return json.loads(_core.generate_fleet(_dumps(spec)))


def generate_incidents(fleet, scenario=None, seed=7):
    text = _core.generate_incidents(_dumps(fleet), _dumps(scenario), seed)
    return [json.loads(line) for line in text.splitlines() if line]


def _ndjson(records):
    if records is None:
        return ""
    if isinstance(records, str):
        return records
    return "".join(json.dumps(r) + "\n" for r in records)


def score(fleet, incidents=None, budget=None, at=None):
    return json.loads(_core.score(_dumps(fleet), _ndjson(incidents), _dumps(budget), at))


def calibrate(sites, budget=None, population="datacenter"):
    return json.loads(_core.calibrate(list(sites), _dumps(budget), population))


def audit(assignments, budget=None):
    return json.loads(_core.audit(_ndjson(assignments), _dumps(budget)))


def whatif(fleet, actions, incidents=None, budget=None, at=None):
    return json.loads(_core.whatif(_dumps(fleet), _dumps(actions), _ndjson(incidents), _dumps(budget), at))


def run_scenario(scenario_file=None):
    return json.loads(_core.run_scenario(_dumps(scenario_file)))
