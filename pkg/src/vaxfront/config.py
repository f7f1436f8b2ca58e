"""Model definition files.

A model file is a JSON object::

    {"type": "assortative",
     "params": {"a": 5, "b": 2},
     "population": {"dyadic": 1e-14},
     "defaults": {"grid": "0:1:0.05", "side": "both", "seed": 42}}

``population`` is one of {"weights": [...]}, {"uniform": n}, {"grid": m}
or {"dyadic": min_mass}; it is ignored by types whose population is fixed
by their parameters. ``defaults`` holds command defaults that flags
override. See README.md for the parameters of each type.
"""

import json
from pathlib import Path

import numpy as np

from . import models
from .models import ModelError, Population


class ConfigError(ValueError):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


def _need(params, key, where="params"):
    if key not in params:
        raise ConfigError(f"{where}.{key}", "missing required field")
    return params[key]


def _number(params, key, default=None, kind=float):
    if key not in params:
        if default is None:
            raise ConfigError(f"params.{key}", "missing required field")
        return default
    try:
        return kind(params[key])
    except (TypeError, ValueError):
        raise ConfigError(f"params.{key}", f"expected a number, got {params[key]!r}")


def parse_population(spec, default=None):
    if spec is None:
        if default is None:
            raise ConfigError("population", "missing required field")
        return default
    if not isinstance(spec, dict) or len(spec) != 1:
        raise ConfigError("population", "expected one of weights/uniform/grid/dyadic")
    (kind, value), = spec.items()
    try:
        if kind == "weights":
            return Population(np.asarray(value, dtype=float))
        if kind == "uniform":
            return Population.uniform(int(value))
        if kind == "grid":
            return Population.on_grid(int(value))
        if kind == "dyadic":
            return Population.dyadic(float(value))
    except (ModelError, TypeError, ValueError) as exc:
        raise ConfigError(f"population.{kind}", str(exc))
    raise ConfigError("population", f"unknown population kind {kind!r}")


def build_model(doc):
    """Model from a parsed model document."""
    if not isinstance(doc, dict):
        raise ConfigError("model", "expected a JSON object")
    kind = _need(doc, "type", "model")
    params = doc.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("params", "expected an object")
    pop_spec = doc.get("population")
    try:
        if kind == "asym_circle":
            return models.build_asym_circle(_number(params, "N", kind=int))
        if kind == "sym_circle":
            return models.build_sym_circle(_number(params, "N", kind=int))
        if kind == "assortative":
            pop = parse_population(pop_spec)
            return models.build_assortative(_number(params, "a"), _number(params, "b"), pop)
        if kind == "dense":
            K = np.asarray(_need(params, "K"), dtype=float)
            pop = parse_population(pop_spec, Population.uniform(K.shape[0]))
            return models.DenseNextGen(K, pop)
        if kind == "grid":
            values = np.asarray(_need(params, "values"), dtype=float)
            pop = parse_population(pop_spec, Population.on_grid(values.shape[0]))
            return models.GridKernel(values, pop)
        if kind == "rank2":
            pop = parse_population(pop_spec, Population.on_grid(1024))
            alpha = _need(params, "alpha")
            if alpha == "linear":
                alpha = lambda x: 2 * x - 1
            return models.build_rank2(_number(params, "R0", 1.0), _number(params, "sign", kind=int),
                                      alpha, pop)
        if kind == "staircase_rank2":
            pop = parse_population(pop_spec, Population.on_grid(4096))
            x = params.get("x")
            if x is None:
                x = models.log_mesh(_number(params, "N", 11, int))
            return models.build_staircase_rank2(x, pop.n)
        if kind == "sphere_affine":
            return models.build_sphere_affine(_number(params, "a"), _number(params, "b"),
                                              _number(params, "d", kind=int),
                                              _number(params, "cells", 1024, int))
        if kind == "circle_convolution":
            return models.build_circle_convolution(_need(params, "f"),
                                                   _number(params, "cells", 256, int))
    except ModelError as exc:
        raise ConfigError(f"params ({kind})", str(exc))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"params ({kind})", str(exc))
    raise ConfigError("type", f"unknown model type {kind!r}")


def load_model_file(path):
    """Return (model, defaults) from a model file."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError("--model", f"file not found: {path}")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError("--model", f"invalid JSON: {exc}")
    defaults = doc.get("defaults", {}) if isinstance(doc, dict) else {}
    if not isinstance(defaults, dict):
        raise ConfigError("defaults", "expected an object")
    return build_model(doc), defaults
