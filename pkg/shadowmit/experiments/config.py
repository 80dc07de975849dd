# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

"""Experiment configuration files.

A configuration is a single JSON document. Missing fields are filled from
``DEFAULTS`` and unknown fields are rejected. The ``seed`` field seeds every
random stream of an experiment: the frame registers and the outcome
generator of each plan are derived from it and a stream name.
"""

import copy
import hashlib
import json
import logging
import math
import numpy as np
from typing import Any, Dict, List, Optional, Sequence
from ..models import Parameters, readout_model
from ..models.abc import _plain
from ..pauli import Observable
from ..sampling import MAXIMAL_TAPS, SamplerKind, derive_seeds
from ..simulator import ExperimentPlan, state_from_spec

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

# Fields that do not change the results of a run
HASH_EXCLUDED = ("outdir", "threads")

EXPERIMENTS = ("correlations", "threewave", "estimate", "audit")
MODES = ("per_mask", "tensor_product")
ORDERS = ("interleaved", "calibration_first")

DEFAULTS: Dict[str, Any] = {
    "schema_version": SCHEMA_VERSION,
    "experiment": "estimate",
    "qubits": 2,
    "sampler": "tetrahedral",
    "methods": ["direct", "pole", "tetrahedral"],
    "error_model": None,
    "shots": {"main": 100_000, "calibration": 950_000, "direct": 100_000},
    "seed": 20220601,
    "seeds": None,
    "lfsr_width": 32,
    "batch_size": 50_000,
    "drift": {"rate": 0.0},
    "outdir": "results",
    "times": {"start": 0.0, "stop": 2.0, "num": 20},
    "coupling": 1.0,
    "threads": 1,
    "state": None,
    "observable": None,
    "mode": "per_mask",
    "floor": 0.01,
    "clip": False,
    "order": "interleaved",
    "prep_error": 0.0,
    "epsilon": None,
    "expected": 1.0,
}


class ConfigError(ValueError):
    """Raised for invalid configuration files, names the offending field."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class ExperimentConfig(Parameters):
    """Validated experiment configuration with attribute access to its fields."""

    def __init__(self, **params):
        data = copy.deepcopy(DEFAULTS)
        for key, value in params.items():
            if key not in DEFAULTS:
                raise ConfigError(key, "unknown field")
            if isinstance(DEFAULTS[key], dict) and isinstance(value, dict):
                data[key].update(value)
            else:
                data[key] = value
        super().__init__(**data)
        self.validate()

    # ---------------------------------------------------------------------

    def validate(self) -> None:
        if self.schema_version != SCHEMA_VERSION:
            raise ConfigError(
                "schema_version",
                f"expected {SCHEMA_VERSION}, got {self.schema_version}",
            )
        if self.experiment not in EXPERIMENTS:
            raise ConfigError("experiment", f"must be one of {list(EXPERIMENTS)}")
        _positive_int(self.qubits, "qubits")
        if self.experiment == "threewave" and self.qubits != 2:
            raise ConfigError("qubits", "the three-wave sector is encoded on 2 qubits")
        for key in ("main", "calibration", "direct"):
            if key not in self.shots:
                raise ConfigError(f"shots.{key}", "missing")
            _positive_int(self.shots[key], f"shots.{key}")
        unknown = set(self.shots) - {"main", "calibration", "direct"}
        if unknown:
            raise ConfigError("shots", f"unknown entries {sorted(unknown)}")
        _positive_int(self.batch_size, "batch_size")
        _positive_int(self.threads, "threads")
        try:
            SamplerKind.parse(self.sampler)
            for m in self.methods:
                SamplerKind.parse(m)
        except ValueError as e:
            raise ConfigError("sampler", str(e))
        if self.lfsr_width not in MAXIMAL_TAPS:
            raise ConfigError("lfsr_width", f"must be one of {sorted(MAXIMAL_TAPS)}")
        if self.seeds is not None:
            if len(self.seeds) != self.qubits or any(int(s) == 0 for s in self.seeds):
                raise ConfigError("seeds", f"expected {self.qubits} non-zero seeds")
        try:
            readout_model(self.error_model).validate(self.qubits)
        except (ValueError, TypeError) as e:
            raise ConfigError("error_model", str(e))
        if set(self.drift) - {"rate"}:
            raise ConfigError("drift", "only 'rate' is supported")
        if not math.isfinite(float(self.drift.get("rate", 0.0))):
            raise ConfigError("drift.rate", "must be finite")
        try:
            times = self.time_grid()
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError("times", str(e))
        if len(times) < 1 or np.any(np.diff(times) <= 0):
            raise ConfigError("times", "time grid must be strictly increasing")
        if not math.isfinite(float(self.coupling)):
            raise ConfigError("coupling", "must be finite")
        if self.mode not in MODES:
            raise ConfigError("mode", f"must be one of {list(MODES)}")
        if self.order not in ORDERS:
            raise ConfigError("order", f"must be one of {list(ORDERS)}")
        if not float(self.floor) >= 0:
            raise ConfigError("floor", "must be non-negative")
        if not 0 <= float(self.prep_error) <= 1:
            raise ConfigError("prep_error", "must be in [0, 1]")
        if self.epsilon is not None and not float(self.epsilon) > 0:
            raise ConfigError("epsilon", "must be positive")
        if not abs(float(self.expected)) <= 1:
            raise ConfigError("expected", "must be in [-1, 1]")
        try:
            self.build_state()
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError("state", str(e))
        try:
            self.build_observable()
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError("observable", str(e))

    # ---------------------------------------------------------------------

    def time_grid(self) -> np.ndarray:
        times = self.times
        if isinstance(times, dict):
            start, stop = float(times["start"]), float(times["stop"])
            return np.linspace(start, stop, int(times["num"]))
        return np.asarray(times, dtype=np.float64)

    def sampler_kind(self) -> SamplerKind:
        return SamplerKind.parse(self.sampler)

    def build_state(self):
        state = state_from_spec(self.state, self.qubits)
        if state.num_qubits != self.qubits:
            raise ValueError(
                f"state has {state.num_qubits} qubits, expected {self.qubits}"
            )
        return state

    def build_observable(self) -> Observable:
        """The configured observable, ``Z`` on every qubit by default."""
        if self.observable is None:
            return Observable({"Z" * self.qubits: 1.0})
        obs = Observable(self.observable)
        if obs.num_qubits != self.qubits:
            raise ValueError(
                f"observable acts on {obs.num_qubits} qubits, expected {self.qubits}"
            )
        return obs

    def stream_seed(self, stream: str) -> int:
        """Integer seed of a named random stream."""
        digest = hashlib.sha256(f"{int(self.seed)}:{stream}".encode()).hexdigest()
        return int(digest[:15], 16)

    def frame_seeds(self, stream: str) -> List[int]:
        if self.seeds is not None and stream == "main":
            return [int(s) for s in self.seeds]
        return derive_seeds(self.stream_seed(stream), self.qubits, self.lfsr_width)

    def plan(
        self,
        stream: str,
        state,
        n_shots: int,
        sampler: Optional[SamplerKind] = None,
        origin: str = "main",
    ) -> ExperimentPlan:
        """Builds the plan of a named stream with the configured readout error."""
        return ExperimentPlan(
            state=state,
            n_shots=int(n_shots),
            sampler=self.sampler_kind() if sampler is None else sampler,
            seeds=tuple(self.frame_seeds(stream)),
            error_model=readout_model(self.error_model),
            batch_size=int(self.batch_size),
            drift_rate=float(self.drift.get("rate", 0.0)),
            outcome_seed=self.stream_seed("outcome:" + stream),
            lfsr_width=int(self.lfsr_width),
            origin=origin,
        )

    def to_dict(self) -> Dict[str, Any]:
        return copy.deepcopy(dict(self.params))

    def hash(self) -> str:
        return config_hash(self)


def _positive_int(value, field: str) -> None:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
        raise ConfigError(field, f"must be a positive integer, got {value!r}")


def config_hash(cfg: ExperimentConfig) -> str:
    """SHA-256 of the canonical JSON form of the result relevant fields."""
    data = {k: v for k, v in cfg.to_dict().items() if k not in HASH_EXCLUDED}
    text = json.dumps(_plain(data), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def apply_overrides(data: Dict[str, Any], **overrides) -> Dict[str, Any]:
    """Returns a copy of raw config data with command line overrides applied.

    ``seed`` replaces the base seed and drops explicit per-qubit seeds,
    ``None`` values are ignored.
    """
    data = copy.deepcopy(data)
    for key, value in overrides.items():
        if value is None:
            continue
        if key == "seed":
            data["seeds"] = None
        data[key] = value
    return data


def load_config(
    path=None, experiment: Optional[str] = None, **overrides
) -> ExperimentConfig:
    """Reads and validates a configuration file.

    Parameters
    ----------
    path : str or Path, optional
        The JSON file. Without a path the defaults are used.
    experiment : str, optional
        Sets the experiment if the file does not, must match otherwise.
    **overrides
        Field overrides, see :func:`apply_overrides`.

    Raises
    ------
    ConfigError
        If the document is not valid JSON or fails validation.
    OSError
        If the file cannot be read.
    """
    data: Dict[str, Any] = dict()
    if path is not None:
        with open(path, "r") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as e:
                raise ConfigError(str(path), f"invalid JSON ({e})")
        if not isinstance(data, dict):
            raise ConfigError(str(path), "top level must be an object")
        logger.info("Loaded config %s", path)
    if experiment is not None:
        if data.get("experiment", experiment) != experiment:
            found = data["experiment"]
            raise ConfigError(
                "experiment", f"file is for '{found}', not '{experiment}'"
            )
        data["experiment"] = experiment
    data = apply_overrides(data, **overrides)
    return ExperimentConfig(**data)


def methods_of(cfg: ExperimentConfig) -> Sequence[SamplerKind]:
    return [SamplerKind.parse(m) for m in cfg.methods]
