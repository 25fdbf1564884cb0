"""JSON configuration documents.

Layout::

    {
      "source":    {"pulse_rate": 5e6, "pulse_energy": null, "wavelength": 1.55e-6},
      "path":      {"channel_atten_db_per_km": 0.2, "channel_length_km": 25, ...},
      "detector1": {"efficiency": 0.1, "dark_carriers": 1e-5, "avalanche_prob": 1},
      "detector2": {...},
      "protocol":  {"alice_state_probs": [...], "bob_basis_probs": [...],
                    "sifting_ratio_override": null, "optical_error_prob": 0.01},
      "engine":    {"mu_override": 0.5, "n_max": null, "tail_tol": 1e-12,
                    "mode": "exact", "mu_composition": "one-way",
                    "epsilon": {"kind": "linear", "f_ec": 1.2}}
    }

``source``, ``detector1`` and ``detector2`` are required; everything else
falls back to defaults. Unknown keys are rejected.
"""
from __future__ import annotations

import dataclasses
import json
from pathlib import Path
from typing import Any, Union

from .metrics import strategy_from_dict, strategy_to_dict
from .system import (ConfigurationError, Detector, LaserSource, OpticalPath, ProtocolConfig,
                     SystemConfig)

_SECTIONS = {
    "source": LaserSource,
    "path": OpticalPath,
    "detector1": Detector,
    "detector2": Detector,
    "protocol": ProtocolConfig,
}
_ENGINE_KEYS = ("mu_override", "n_max", "tail_tol", "mode", "mu_composition", "epsilon")
_REQUIRED = ("source", "detector1", "detector2")


class ConfigParseError(ConfigurationError):
    """Config document is malformed; the message names the offending key path."""


def _build(section: str, cls, data: Any):
    if not isinstance(data, dict):
        raise ConfigParseError(f"{section}: expected an object")
    names = {f.name for f in dataclasses.fields(cls)}
    for key in data:
        if key not in names:
            raise ConfigParseError(f"{section}.{key}: unknown key")
    try:
        return cls(**data)
    except ConfigurationError as exc:
        raise ConfigParseError(f"{section}.{exc}") from None
    except TypeError as exc:
        raise ConfigParseError(f"{section}: {exc}") from None


def config_from_dict(doc: Any) -> SystemConfig:
    if not isinstance(doc, dict):
        raise ConfigParseError("<root>: expected an object")
    for key in doc:
        if key not in _SECTIONS and key != "engine":
            raise ConfigParseError(f"{key}: unknown key")
    for key in _REQUIRED:
        if key not in doc:
            raise ConfigParseError(f"{key}: missing required section")

    parts = {name: _build(name, cls, doc[name]) for name, cls in _SECTIONS.items() if name in doc}

    engine = doc.get("engine", {})
    if not isinstance(engine, dict):
        raise ConfigParseError("engine: expected an object")
    for key in engine:
        if key not in _ENGINE_KEYS:
            raise ConfigParseError(f"engine.{key}: unknown key")
    options = {k: v for k, v in engine.items() if v is not None}
    if "epsilon" in options:
        try:
            options["epsilon"] = strategy_from_dict(options["epsilon"])
        except (ValueError, KeyError, TypeError, AttributeError) as exc:
            raise ConfigParseError(f"engine.epsilon: {exc}") from None
    try:
        return SystemConfig(**parts, **options)
    except ConfigurationError as exc:
        msg = str(exc)
        raise ConfigParseError(msg if msg.startswith("source.") else f"engine.{msg}") from None


def parse_config(text: str) -> SystemConfig:
    """Parse and validate a JSON configuration document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"<root>: malformed JSON ({exc})") from None
    return config_from_dict(doc)


def load_config(path: Union[str, Path]) -> SystemConfig:
    return parse_config(Path(path).read_text())


def config_to_dict(config: SystemConfig) -> dict:
    doc = {name: dataclasses.asdict(getattr(config, name)) for name in _SECTIONS}
    doc["protocol"]["alice_state_probs"] = list(config.protocol.alice_state_probs)
    doc["protocol"]["bob_basis_probs"] = list(config.protocol.bob_basis_probs)
    doc["engine"] = {
        "mu_override": config.mu_override,
        "n_max": config.n_max,
        "tail_tol": config.tail_tol,
        "mode": config.mode,
        "mu_composition": config.mu_composition,
        "epsilon": strategy_to_dict(config.epsilon),
    }
    return doc


def dump_config(config: SystemConfig) -> str:
    return json.dumps(config_to_dict(config), indent=2)
