"""Scenario files: JSON descriptions of a link, an eavesdropper and an optional sweep.

All SNRs are given in dB.  A minimal scenario::

    {
      "rf_main":  {"alpha": 1.6, "mu": 1.5, "mean_snr_db": 20},
      "rf_eve":   {"alpha": 1.6, "mu": 1.5, "mean_snr_db": 10},
      "uwoc":     {"preset": "[2.4, 0.05]", "mean_snr_db": 10},
      "relay":    {"mode": "from_powers", "P1": 1, "P2": 1, "N0": 1, "N1": 1},
      "secrecy":  {"rate_rs": 0.01},
      "sweep":    {"variable": "rf_main.mean_snr_db", "start": 0, "stop": 40, "points": 41}
    }

``series`` optionally lists curves, each a label plus dotted-path overrides
(``{"label": "ge=3dB", "set": {"rf_eve.mean_snr_db": 3}}``).
"""

from __future__ import annotations

import copy
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .channels import AlphaMuParams, EggParams, db_to_linear, get_preset, load_presets
from .e2e import LinkPair, RelayConfig
from .errors import ConfigError
from .montecarlo import McConfig
from .optimizer import PowerTarget
from .secrecy import EveParams, SecrecyConfig

SWEEP_VARIABLES = ("rf_main.mean_snr_db", "rf_eve.mean_snr_db", "uwoc.mean_snr_db",
                   "secrecy.rate_rs")


@dataclass(frozen=True)
class Sweep:
    variable: str
    start: float
    stop: float
    points: int

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class Scenario:
    links: LinkPair
    eve: EveParams
    relay: RelayConfig
    secrecy: SecrecyConfig
    sweep: Sweep | None = None
    mc: McConfig | None = None
    optimize: PowerTarget | None = None
    name: str = "scenario"
    uwoc_label: str = "custom"
    raw: dict = field(default_factory=dict, compare=False, repr=False)


def _field(obj: dict, key: str, path: str, kind=float, default: Any = ...):
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: expected an object")
    if key not in obj:
        if default is ...:
            raise ConfigError(f"{path}.{key}: required field is missing")
        return default
    try:
        return kind(obj[key])
    except (TypeError, ValueError):
        raise ConfigError(f"{path}.{key}: cannot interpret {obj[key]!r} as {kind.__name__}") from None


def _build(path: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _alpha_mu(obj, path) -> AlphaMuParams:
    return _build(path, AlphaMuParams.from_db, _field(obj, "alpha", path), _field(obj, "mu", path),
                  _field(obj, "mean_snr_db", path))


def _uwoc(obj, path, registry) -> tuple[EggParams, str]:
    mu_r = db_to_linear(_field(obj, "mean_snr_db", path))
    if "preset" in obj:
        preset = _build(path, get_preset, str(obj["preset"]), registry)
        params = preset.params.with_mu_r(mu_r)
        if "r" in obj:
            params = _build(path, EggParams, params.omega, params.lambda_, params.a, params.b,
                            params.c, _field(obj, "r", path, int), mu_r)
        return params, preset.label
    params = _build(path, EggParams, _field(obj, "omega", path), _field(obj, "lambda", path),
                    _field(obj, "a", path), _field(obj, "b", path), _field(obj, "c", path),
                    _field(obj, "r", path, int, 1), mu_r)
    return params, "custom"


def _relay(obj, path) -> RelayConfig:
    mode = _field(obj, "mode", path, str, "from_powers")
    if mode == "explicit_C":
        return _build(path, RelayConfig.explicit, _field(obj, "C", path))
    if mode != "from_powers":
        raise ConfigError(f"{path}.mode: expected 'explicit_C' or 'from_powers', got {mode!r}")
    return _build(path, RelayConfig, "from_powers", None,
                  *(_field(obj, k, path, float, 1.0) for k in ("P1", "P2", "N0", "N1")))


def parse_scenario(data: dict, *, registry=None) -> Scenario:
    if not isinstance(data, dict):
        raise ConfigError("scenario must be a JSON object")
    registry = load_presets() if registry is None else registry
    rf = _alpha_mu(data.get("rf_main"), "rf_main")
    eve = _alpha_mu(data.get("rf_eve"), "rf_eve")
    uwoc, label = _uwoc(data.get("uwoc"), "uwoc", registry)
    relay = _relay(data.get("relay", {}), "relay")
    sec = data.get("secrecy", {})
    secrecy = _build("secrecy", SecrecyConfig, _field(sec, "rate_rs", "secrecy", float, 0.0),
                     _field(sec, "threshold_base", "secrecy", str, "natural"))
    sweep = None
    if data.get("sweep") is not None:
        sw = data["sweep"]
        variable = _field(sw, "variable", "sweep", str)
        if variable not in SWEEP_VARIABLES:
            raise ConfigError(f"sweep.variable: {variable!r} is not one of {SWEEP_VARIABLES}")
        points = _field(sw, "points", "sweep", int)
        if points < 1:
            raise ConfigError("sweep.points: must be at least 1")
        sweep = Sweep(variable, _field(sw, "start", "sweep"), _field(sw, "stop", "sweep"), points)
    mc = None
    if data.get("mc") is not None:
        m = data["mc"]
        mc = _build("mc", McConfig, _field(m, "trials", "mc", int, 1_000_000),
                    _field(m, "master_seed", "mc", int, 20240101),
                    _field(m, "stream_count", "mc", int, 8))
    target = None
    if data.get("optimize") is not None:
        o = data["optimize"]
        target = _build("optimize", PowerTarget, _field(o, "metric", "optimize", str),
                        _field(o, "target", "optimize"),
                        _field(o, "search_lo", "optimize", float, 0.0),
                        _field(o, "search_hi", "optimize", float, 50.0),
                        _field(o, "tol_db", "optimize", float, 0.05))
    return Scenario(LinkPair(rf, uwoc), eve, relay, secrecy, sweep, mc, target,
                    str(data.get("name", "scenario")), label, data)


def read_scenario_json(source: str) -> dict:
    """Read scenario JSON from a path, or from stdin when ``source == '-'``."""
    try:
        text = sys.stdin.read() if source == "-" else Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read scenario {source!r}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}: invalid JSON at line {exc.lineno}, column {exc.colno}: "
                          f"{exc.msg}") from None


def load_scenario(source: str, *, registry=None) -> Scenario:
    return parse_scenario(read_scenario_json(source), registry=registry)


def set_path(data: dict, dotted: str, value) -> dict:
    """Copy of ``data`` with ``dotted`` (e.g. ``rf_eve.mean_snr_db``) replaced."""
    out = copy.deepcopy(data)
    node = out
    keys = dotted.split(".")
    for key in keys[:-1]:
        if not isinstance(node.get(key), dict):
            raise ConfigError(f"{dotted}: no such object {key!r}")
        node = node[key]
    node[keys[-1]] = value
    return out


def series_variants(data: dict) -> list[tuple[str, dict]]:
    """(label, scenario dict) for every curve; a single unlabeled curve without ``series``."""
    series = data.get("series")
    if not series:
        return [("", data)]
    variants = []
    for i, item in enumerate(series):
        if not isinstance(item, dict) or "label" not in item:
            raise ConfigError(f"series[{i}]: needs a label")
        variant = data
        for key, value in item.get("set", {}).items():
            variant = set_path(variant, key, value)
        variants.append((str(item["label"]), variant))
    return variants


def point_scenarios(data: dict, *, registry=None) -> list[tuple[str, float | None, Scenario]]:
    """Expand series and sweep into ``(series label, axis value, scenario)`` triples."""
    registry = load_presets() if registry is None else registry
    out = []
    for label, variant in series_variants(data):
        base = parse_scenario(variant, registry=registry)
        if base.sweep is None:
            out.append((label, None, base))
            continue
        for value in base.sweep.values():
            point = set_path(variant, base.sweep.variable, float(value))
            out.append((label, float(value), parse_scenario(point, registry=registry)))
    return out
