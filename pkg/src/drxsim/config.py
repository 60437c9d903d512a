"""JSON run configuration: schema validation, presets and object construction."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from drxsim.engine import Scenario
from drxsim.errors import ConfigError, DrxSimError
from drxsim.radio import PowerProfile
from drxsim.workload import PathModel, workload_from_dict

_NUM = {"type": "number"}
_POS = {"type": "number", "exclusiveMinimum": 0}
_NONNEG = {"type": "number", "minimum": 0}
_COMMENTS = {"^_": {}}

_DUTY_CYCLE = {
    "type": "object",
    "required": ["cycle_s", "on_s", "p_on_w", "p_sleep_w"],
    "properties": {"cycle_s": _POS, "on_s": _NONNEG, "p_on_w": _NONNEG, "p_sleep_w": _NONNEG},
    "patternProperties": _COMMENTS,
    "additionalProperties": False,
}

PROFILE_SCHEMA = {
    "type": "object",
    "required": ["p_cr_w", "short_drx", "long_drx", "idle", "timers"],
    "properties": {
        "p_cr_w": _POS,
        "short_drx": _DUTY_CYCLE,
        "long_drx": _DUTY_CYCLE,
        "idle": _DUTY_CYCLE,
        "timers": {
            "type": "object",
            "required": ["t1_s", "t2_s", "t3_s"],
            "properties": {"t1_s": _POS, "t2_s": _POS, "t3_s": _POS},
            "patternProperties": _COMMENTS,
            "additionalProperties": False,
        },
        "nominal_voltage_v": _POS,
    },
    "patternProperties": _COMMENTS,
    "additionalProperties": False,
}

_PROFILE_REF = {"oneOf": [{"type": "string"}, PROFILE_SCHEMA]}

_PATH = {
    "type": "object",
    "required": ["base_rtt_s", "bandwidth_Bps"],
    "properties": {
        "base_rtt_s": _POS,
        "added_delay_s": _NONNEG,
        "bandwidth_Bps": _POS,
        "mss_B": {"type": "integer", "minimum": 1},
        "init_cwnd": {"type": "integer", "minimum": 1},
        "max_cwnd": {"type": ["integer", "null"], "minimum": 1},
    },
    "patternProperties": _COMMENTS,
    "additionalProperties": False,
}

_WORKLOAD = {
    "type": "object",
    "required": ["kind", "period_s", "duration_s"],
    "properties": {
        "kind": {"enum": ["download", "request_response"]},
        "period_s": _POS,
        "duration_s": _POS,
        "resource_bytes": {"type": "integer", "minimum": 1},
        "reuse_connection": {"type": "boolean"},
        "request_bytes": {"type": "integer", "minimum": 1},
        "response_bytes": {"type": ["integer", "null"], "minimum": 1},
    },
    "allOf": [
        {"if": {"properties": {"kind": {"const": "download"}}}, "then": {"required": ["resource_bytes"]}},
        {
            "if": {"properties": {"kind": {"const": "request_response"}}},
            "then": {"required": ["request_bytes"]},
        },
    ],
    "patternProperties": _COMMENTS,
    "additionalProperties": False,
}

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["scenarios"],
    "properties": {
        "profile": _PROFILE_REF,
        "accounting": {"enum": ["average", "exact-cycle"]},
        "scenarios": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["label", "workload", "path"],
                "properties": {
                    "label": {"type": "string", "pattern": "^[^,\\n]+$"},
                    "profile": _PROFILE_REF,
                    "workload": _WORKLOAD,
                    "path": _PATH,
                    "accounting": {"enum": ["average", "exact-cycle"]},
                },
                "patternProperties": _COMMENTS,
                "additionalProperties": False,
            },
        },
        "analysis": {
            "type": "object",
            "properties": {"slot_len_s": _POS, "warmup_s": _NONNEG},
            "patternProperties": _COMMENTS,
            "additionalProperties": False,
        },
        "output": {
            "type": "object",
            "properties": {
                "directory": {"type": "string"},
                "formats": {
                    "type": "array",
                    "minItems": 1,
                    "uniqueItems": True,
                    "items": {"enum": ["json", "csv", "svg"]},
                },
            },
            "patternProperties": _COMMENTS,
            "additionalProperties": False,
        },
        "sweep": {
            "type": "object",
            "required": ["parameter", "values"],
            "properties": {
                "parameter": {"type": "string"},
                "values": {"type": "array", "items": _NUM},
                "baseline": {"type": "string"},
            },
            "patternProperties": _COMMENTS,
            "additionalProperties": False,
        },
    },
    "patternProperties": _COMMENTS,
    "additionalProperties": False,
}


@dataclass(frozen=True)
class RunConfig:
    profile: PowerProfile
    scenarios: tuple[Scenario, ...]
    slot_len: float = 3600.0
    warmup: float = 0.0
    out_dir: str | None = None
    formats: tuple[str, ...] = ("json",)
    sweep_parameter: str | None = None
    sweep_values: tuple[float, ...] = ()
    sweep_baseline: str | None = None
    fingerprint: str = ""
    raw: dict[str, Any] = field(default_factory=dict, repr=False, compare=False)

    def scenario(self, label: str) -> Scenario:
        for s in self.scenarios:
            if s.label == label:
                return s
        raise ConfigError(f"no scenario labelled {label!r}", "scenarios")


def _error_field(err: jsonschema.ValidationError) -> str:
    parts = [str(p) for p in err.absolute_path]
    if err.validator == "required" and isinstance(err.instance, dict):
        missing = [k for k in err.validator_value if k not in err.instance]
        if missing:
            parts.append(missing[0])
    return ".".join(parts) or "<root>"


def validate(doc: Any, schema: dict[str, Any] = CONFIG_SCHEMA) -> None:
    """Raise :class:`ConfigError` naming the first offending field, if any."""
    validator = jsonschema.Draft7Validator(schema)
    errors = sorted(validator.iter_errors(doc), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        err = errors[0]
        # oneOf failures hide the useful message one level down
        if err.context:
            err = max(err.context, key=lambda e: len(e.absolute_path))
        raise ConfigError(err.message, _error_field(err))


def fingerprint(doc: Any) -> str:
    canon = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def preset_path(name: str) -> Path:
    """Filesystem path of a shipped preset (``.json`` suffix optional)."""
    fname = name if name.endswith(".json") else f"{name}.json"
    ref = resources.files("drxsim") / "presets" / fname
    if not ref.is_file():
        raise ConfigError(f"no shipped preset named {name!r}")
    return Path(str(ref))


def list_presets() -> list[str]:
    root = resources.files("drxsim") / "presets"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def _profile_dict(ref: Any) -> dict[str, Any]:
    if isinstance(ref, dict):
        return ref
    name = "default_profile" if ref == "default" else ref
    with open(preset_path(name)) as f:
        return json.load(f)


def load_profile(ref: str | dict[str, Any] = "default") -> PowerProfile:
    """Build a :class:`PowerProfile` from a dict or a shipped profile name."""
    d = _profile_dict(ref)
    validate(d, PROFILE_SCHEMA)
    try:
        return PowerProfile.from_dict(d)
    except DrxSimError as exc:
        raise ConfigError(str(exc), "profile") from exc


def parse_config(doc: dict[str, Any]) -> RunConfig:
    validate(doc)
    profile = load_profile(doc.get("profile", "default"))
    accounting = doc.get("accounting", "average")
    scenarios = []
    labels = set()
    for i, s in enumerate(doc["scenarios"]):
        where = f"scenarios.{i}"
        if s["label"] in labels:
            raise ConfigError(f"duplicate label {s['label']!r}", f"{where}.label")
        labels.add(s["label"])
        prof = load_profile(s["profile"]) if "profile" in s else profile
        try:
            workload = workload_from_dict(s["workload"])
        except DrxSimError as exc:
            raise ConfigError(str(exc), f"{where}.workload") from exc
        try:
            path = PathModel.from_dict(s["path"])
        except DrxSimError as exc:
            raise ConfigError(str(exc), f"{where}.path") from exc
        scenarios.append(Scenario(s["label"], prof, workload, path, s.get("accounting", accounting)))
    analysis = doc.get("analysis", {})
    output = doc.get("output", {})
    sw = doc.get("sweep", {})
    return RunConfig(
        profile=profile,
        scenarios=tuple(scenarios),
        slot_len=analysis.get("slot_len_s", 3600.0),
        warmup=analysis.get("warmup_s", 0.0),
        out_dir=output.get("directory"),
        formats=tuple(output.get("formats", ["json"])),
        sweep_parameter=sw.get("parameter"),
        sweep_values=tuple(sw.get("values", ())),
        sweep_baseline=sw.get("baseline"),
        fingerprint=fingerprint(doc),
        raw=doc,
    )


def load_config(path: str | Path) -> RunConfig:
    """Read and validate a run configuration file.

    ``path`` may also name a shipped preset, e.g. ``"software_monitor"``.
    """
    p = Path(path)
    if not p.exists() and not p.suffix and p.parent == Path("."):
        p = preset_path(str(path))
    try:
        with open(p) as f:
            doc = json.load(f)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from exc
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    return parse_config(doc)
