"""Scenario files: one JSON document describing a certification run.

A scenario names the candidate zeros, the majorant, and optional blocks
for the radius profile, sweep family, probe grids, tolerances, and the
disk-regime constants.  Validation reports every schema violation with
a JSON-pointer path before any numerics start.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from jsonschema import Draft202012Validator

from .criterion import m0_dyadic_grid
from .errors import SchemaError
from .majorants import (DSubharmonicMajorant, make_log_abs_poly,
                        make_log_poly_growth, make_radial_power,
                        make_zero_model)
from .means import DiskFractionProfile, PlanePowerProfile
from .measures import Region, ZeroDistribution
from .testfam import SmoothCappedLogFamily, TruncatedLogFamily

_COMPLEX = {
    "type": "object",
    "properties": {"re": {"type": "number"}, "im": {"type": "number"}},
    "required": ["re"],
    "additionalProperties": False,
}

_MODEL = {
    "type": "object",
    "oneOf": [
        {
            "properties": {
                "kind": {"const": "radial-power"},
                "sigma": {"type": "number", "exclusiveMinimum": 0},
                "rho": {"type": "number", "exclusiveMinimum": 0},
            },
            "required": ["kind", "rho"],
            "additionalProperties": False,
        },
        {
            "properties": {
                "kind": {"const": "log-abs-poly"},
                "coeffs": {
                    "type": "array",
                    "items": {"$ref": "#/$defs/complex"},
                    "minItems": 1,
                },
            },
            "required": ["kind", "coeffs"],
            "additionalProperties": False,
        },
        {
            "properties": {"kind": {"const": "log-poly-growth"}},
            "required": ["kind"],
            "additionalProperties": False,
        },
        {
            "properties": {"kind": {"const": "zero"}},
            "required": ["kind"],
            "additionalProperties": False,
        },
    ],
}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "$defs": {"complex": _COMPLEX, "model": _MODEL},
    "properties": {
        "label": {"type": "string"},
        "notes": {"type": "string"},
        "zeros": {
            "type": "object",
            "oneOf": [
                {
                    "properties": {
                        "points": {
                            "type": "array",
                            "items": {
                                "type": "object",
                                "properties": {
                                    "re": {"type": "number"},
                                    "im": {"type": "number"},
                                    "mult": {"type": "integer", "minimum": 1},
                                },
                                "required": ["re"],
                                "additionalProperties": False,
                            },
                        },
                    },
                    "required": ["points"],
                    "additionalProperties": False,
                },
                {
                    "properties": {
                        "generator": {
                            "type": "object",
                            "properties": {
                                "kind": {"enum": ["real-multiples",
                                                  "gaussian-integers"]},
                                "step": {"type": "number",
                                         "exclusiveMinimum": 0},
                                "scale": {"type": "number",
                                          "exclusiveMinimum": 0},
                                "max_radius": {"type": ["number", "null"],
                                               "exclusiveMinimum": 0},
                            },
                            "required": ["kind"],
                            "additionalProperties": False,
                        },
                    },
                    "required": ["generator"],
                    "additionalProperties": False,
                },
            ],
        },
        "majorant": {
            "type": "object",
            "properties": {
                "up": {"$ref": "#/$defs/model"},
                "low": {"$ref": "#/$defs/model"},
            },
            "required": ["up"],
            "additionalProperties": False,
        },
        "profile": {
            "type": "object",
            "oneOf": [
                {
                    "properties": {
                        "kind": {"const": "plane-power"},
                        "power": {"type": "number", "minimum": 0},
                    },
                    "required": ["kind", "power"],
                    "additionalProperties": False,
                },
                {
                    "properties": {
                        "kind": {"const": "disk-fraction"},
                        "fraction": {"type": "number",
                                     "exclusiveMinimum": 0,
                                     "exclusiveMaximum": 1},
                        "center": {"$ref": "#/$defs/complex"},
                        "R": {"type": "number", "exclusiveMinimum": 0},
                    },
                    "required": ["kind", "fraction", "R"],
                    "additionalProperties": False,
                },
            ],
        },
        "family": {
            "type": "object",
            "properties": {
                "kind": {"enum": ["truncated-log", "smooth-capped-log"]},
                "t_min": {"type": "number", "exclusiveMinimum": 0},
                "t_max": {"type": "number", "exclusiveMinimum": 0},
                "ratio": {"type": "number", "exclusiveMinimum": 1},
                "eps": {"type": "number", "exclusiveMinimum": 0},
            },
            "required": ["kind", "t_max"],
            "additionalProperties": False,
        },
        "grids": {
            "type": "object",
            "properties": {
                "sufficiency": {
                    "type": "object",
                    "oneOf": [
                        {
                            "properties": {
                                "kind": {"const": "random-disk"},
                                "radius": {"type": "number",
                                           "exclusiveMinimum": 0},
                                "count": {"type": "integer", "minimum": 1},
                                "seed": {"type": "integer", "minimum": 0},
                                "center": {"$ref": "#/$defs/complex"},
                            },
                            "required": ["kind", "radius", "count"],
                            "additionalProperties": False,
                        },
                        {
                            "properties": {
                                "kind": {"const": "explicit"},
                                "points": {
                                    "type": "array",
                                    "items": {"$ref": "#/$defs/complex"},
                                    "minItems": 1,
                                },
                            },
                            "required": ["kind", "points"],
                            "additionalProperties": False,
                        },
                    ],
                },
                "m0": {
                    "type": "object",
                    "properties": {
                        "r_max": {"type": "number", "exclusiveMinimum": 0},
                        "per_shell": {"type": "integer", "minimum": 1},
                        "power": {"type": "number", "minimum": 0},
                    },
                    "required": ["r_max"],
                    "additionalProperties": False,
                },
            },
            "additionalProperties": False,
        },
        "tolerances": {
            "type": "object",
            "properties": {
                "default": {"type": "number", "exclusiveMinimum": 0},
                "margin": {"type": "number", "exclusiveMinimum": 0},
                "m0": {"type": "number", "exclusiveMinimum": 0},
                "sufficiency": {"type": "number", "exclusiveMinimum": 0},
            },
            "additionalProperties": False,
        },
        "lemma1": {
            "type": "object",
            "properties": {
                "d_tilde": {
                    "type": "object",
                    "properties": {
                        "center": {"$ref": "#/$defs/complex"},
                        "radius": {"type": "number", "exclusiveMinimum": 0},
                    },
                    "required": ["radius"],
                    "additionalProperties": False,
                },
                "s": {
                    "type": "object",
                    "properties": {
                        "center": {"$ref": "#/$defs/complex"},
                        "radius": {"type": "number", "exclusiveMinimum": 0},
                    },
                    "required": ["radius"],
                    "additionalProperties": False,
                },
                "z0": {"$ref": "#/$defs/complex"},
                "b": {"type": "number", "exclusiveMinimum": 0},
            },
            "required": ["d_tilde", "s", "b"],
            "additionalProperties": False,
        },
    },
    "required": ["zeros", "majorant"],
    "additionalProperties": False,
}


def _cx(obj, default=0j):
    if obj is None:
        return default
    return complex(obj.get("re", 0.0), obj.get("im", 0.0))


def _make_model(blk):
    if blk is None:
        return make_zero_model()
    kind = blk["kind"]
    if kind == "radial-power":
        return make_radial_power(blk.get("sigma", 1.0), blk["rho"])
    if kind == "log-abs-poly":
        coeffs = [_cx(c) for c in blk["coeffs"]]
        return make_log_abs_poly(coeffs=coeffs)
    if kind == "log-poly-growth":
        return make_log_poly_growth()
    if kind == "zero":
        return make_zero_model()
    raise SchemaError(["/majorant: unknown model kind %r" % kind])


def _make_profile(blk):
    if blk is None:
        return None
    if blk["kind"] == "plane-power":
        return PlanePowerProfile(blk["power"])
    return DiskFractionProfile(blk["fraction"], _cx(blk.get("center")),
                               blk["R"])


def _make_family(blk, tau_max=None):
    if blk is None:
        return None
    t_max = float(tau_max) if tau_max is not None else blk["t_max"]
    common = {"t_min": blk.get("t_min", 0.5), "t_max": t_max,
              "ratio": blk.get("ratio", 2.0 ** 0.25)}
    if blk["kind"] == "truncated-log":
        return TruncatedLogFamily(**common)
    return SmoothCappedLogFamily(eps=blk.get("eps", 0.25), **common)


def build_sufficiency_grid(blk, seed=None):
    if blk["kind"] == "explicit":
        return np.asarray([_cx(p) for p in blk["points"]], dtype=complex)
    rng = np.random.default_rng(blk.get("seed", 0) if seed is None else seed)
    n = blk["count"]
    r = blk["radius"] * np.sqrt(rng.uniform(0.0, 1.0, n))
    theta = rng.uniform(0.0, 2.0 * math.pi, n)
    return _cx(blk.get("center")) + r * np.exp(1j * theta)


@dataclass(frozen=True)
class Scenario:
    raw: dict
    label: str
    zeros: ZeroDistribution
    majorant: DSubharmonicMajorant
    profile: object | None
    family: object | None
    sufficiency_grid: np.ndarray | None
    m0_grid: np.ndarray | None
    m0_power: float | None
    lemma1: dict | None
    tolerances: dict = field(default_factory=dict)

    def tol(self, stage):
        return self.tolerances.get(stage, self.tolerances.get("default", 1e-9))


def validate_scenario(doc):
    validator = Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        msgs = []
        for e in errors:
            path = "/" + "/".join(str(p) for p in e.absolute_path)
            msgs.append("%s: %s" % (path or "/", e.message))
        raise SchemaError(msgs)


def load_scenario(path, *, tau_max=None, seed=None):
    """Read and validate a scenario file, building the runtime objects."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(["/: not valid JSON (%s)" % exc]) from exc
    validate_scenario(doc)
    zeros = ZeroDistribution.from_json(doc["zeros"])
    majorant = DSubharmonicMajorant(
        up=_make_model(doc["majorant"]["up"]),
        low=_make_model(doc["majorant"].get("low")))
    profile = _make_profile(doc.get("profile"))
    family = _make_family(doc.get("family"), tau_max=tau_max)
    grids = doc.get("grids", {})
    grid_s = None
    if "sufficiency" in grids:
        grid_s = build_sufficiency_grid(grids["sufficiency"], seed=seed)
    grid_m = None
    power = None
    if "m0" in grids:
        blk = grids["m0"]
        grid_m = m0_dyadic_grid(blk["r_max"], blk.get("per_shell", 8))
        if "power" in blk:
            power = float(blk["power"])
        elif isinstance(profile, PlanePowerProfile):
            power = profile.power
        else:
            raise SchemaError(
                ["/grids/m0: needs a power (no plane profile to take it from)"])
    lemma1 = None
    if "lemma1" in doc:
        blk = doc["lemma1"]
        lemma1 = {
            "d_tilde": Region.disk(_cx(blk["d_tilde"].get("center")),
                                   blk["d_tilde"]["radius"]),
            "s": Region.disk(_cx(blk["s"].get("center")),
                             blk["s"]["radius"]),
            "z0": _cx(blk.get("z0")),
            "b": float(blk["b"]),
        }
    return Scenario(
        raw=doc, label=doc.get("label", ""), zeros=zeros, majorant=majorant,
        profile=profile, family=family, sufficiency_grid=grid_s,
        m0_grid=grid_m, m0_power=power, lemma1=lemma1,
        tolerances=dict(doc.get("tolerances", {})))
