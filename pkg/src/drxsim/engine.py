"""Run scenarios through the radio model and compare server placements."""

from __future__ import annotations

import copy
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from drxsim.errors import ConfigError, InvalidComparisonError, InvalidInputError
from drxsim.radio import (
    ACCOUNTING_MODES,
    CASCADE,
    AccountingMode,
    PowerProfile,
    RadioState,
    StateInterval,
    build_state_timeline,
    energy_of_interval,
)
from drxsim.workload import EventTrace, PathModel, Workload, generate_trace, workload_from_dict


@dataclass(frozen=True)
class Scenario:
    label: str
    profile: PowerProfile
    workload: Workload
    path: PathModel
    accounting: AccountingMode = "average"

    def __post_init__(self) -> None:
        if self.accounting not in ACCOUNTING_MODES:
            raise InvalidInputError(f"unknown accounting mode {self.accounting!r}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "profile": self.profile.to_dict(),
            "workload": self.workload.to_dict(),
            "path": self.path.to_dict(),
            "accounting": self.accounting,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> Scenario:
        return cls(
            label=d["label"],
            profile=PowerProfile.from_dict(d["profile"]),
            workload=workload_from_dict(d["workload"]),
            path=PathModel.from_dict(d["path"]),
            accounting=d.get("accounting", "average"),
        )


@dataclass(frozen=True)
class EnergyReport:
    label: str
    horizon: float
    total_energy: float
    per_state_time: dict[RadioState, float]
    per_state_energy: dict[RadioState, float]
    mean_power: float
    mean_current: float
    timeline: tuple[StateInterval, ...] = field(default=(), repr=False, compare=False)

    def to_dict(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "horizon_s": self.horizon,
            "total_J": self.total_energy,
            "mean_W": self.mean_power,
            "mean_A": self.mean_current,
            "per_state": {
                s.value: {"time_s": self.per_state_time[s], "energy_J": self.per_state_energy[s]}
                for s in CASCADE
            },
        }

    def to_json(self, **extra: Any) -> str:
        return json.dumps({**self.to_dict(), **extra}, indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> EnergyReport:
        per = d["per_state"]
        return cls(
            label=d["label"],
            horizon=d["horizon_s"],
            total_energy=d["total_J"],
            per_state_time={s: per[s.value]["time_s"] for s in CASCADE},
            per_state_energy={s: per[s.value]["energy_J"] for s in CASCADE},
            mean_power=d["mean_W"],
            mean_current=d["mean_A"],
        )


def report_from_timeline(
    timeline: Sequence[StateInterval],
    profile: PowerProfile,
    horizon: float,
    label: str,
    mode: AccountingMode = "average",
) -> EnergyReport:
    if not horizon > 0:
        raise InvalidInputError("horizon must be > 0")
    times: dict[RadioState, list[float]] = {s: [] for s in CASCADE}
    energies: dict[RadioState, list[float]] = {s: [] for s in CASCADE}
    for iv in timeline:
        times[iv.state].append(iv.duration)
        energies[iv.state].append(energy_of_interval(iv, profile, mode))
    per_time = {s: math.fsum(v) for s, v in times.items()}
    per_energy = {s: math.fsum(v) for s, v in energies.items()}
    total = math.fsum(per_energy.values())
    mean_power = total / horizon
    return EnergyReport(
        label=label,
        horizon=horizon,
        total_energy=total,
        per_state_time=per_time,
        per_state_energy=per_energy,
        mean_power=mean_power,
        mean_current=mean_power / profile.nominal_voltage,
        timeline=tuple(timeline),
    )


def simulate_trace(
    trace: EventTrace,
    profile: PowerProfile,
    label: str = "trace",
    mode: AccountingMode = "average",
    horizon: float | None = None,
) -> EnergyReport:
    """Energy report for an already built (e.g. measured) packet trace."""
    horizon = trace.horizon if horizon is None else horizon
    timeline = build_state_timeline(trace, profile.timers, horizon)
    return report_from_timeline(timeline, profile, horizon, label, mode)


def simulate(scenario: Scenario) -> EnergyReport:
    """Generate the scenario's traffic and account the radio energy it costs.

    Raises:
        WorkloadOverlapError: propagated from :func:`generate_trace`.
    """
    trace = generate_trace(scenario.workload, scenario.path)
    return simulate_trace(trace, scenario.profile, scenario.label, scenario.accounting)


@dataclass(frozen=True)
class ComparisonRow:
    label: str
    total_energy: float
    ratio: float


@dataclass(frozen=True)
class ComparisonTable:
    baseline: str
    rows: tuple[ComparisonRow, ...]

    def ratio(self, label: str) -> float:
        for row in self.rows:
            if row.label == label:
                return row.ratio
        raise KeyError(label)

    def to_csv(self) -> str:
        lines = ["label,total_J,ratio"]
        lines += [f"{r.label},{r.total_energy!r},{r.ratio!r}" for r in self.rows]
        return "\n".join(lines) + "\n"


def compare(reports: Sequence[EnergyReport], baseline_label: str) -> ComparisonTable:
    """Ratio of each report's total energy to the baseline's."""
    labels = [r.label for r in reports]
    if len(set(labels)) != len(labels):
        raise InvalidComparisonError("report labels must be unique")
    base = next((r for r in reports if r.label == baseline_label), None)
    if base is None:
        raise InvalidComparisonError(f"baseline {baseline_label!r} not among reports {labels}")
    for r in reports:
        if r.horizon != base.horizon:
            raise InvalidComparisonError(
                f"horizon of {r.label!r} ({r.horizon} s) differs from baseline ({base.horizon} s)"
            )
    rows = tuple(
        ComparisonRow(r.label, r.total_energy, 1.0 if r is base else r.total_energy / base.total_energy)
        for r in reports
    )
    return ComparisonTable(baseline_label, rows)


def set_parameter(scenario_dict: dict[str, Any], parameter: str, value: float) -> dict[str, Any]:
    """Copy of ``scenario_dict`` with the numeric field at dotted ``parameter`` replaced."""
    d = copy.deepcopy(scenario_dict)
    keys = parameter.split(".")
    node: Any = d
    for k in keys[:-1]:
        if not isinstance(node, dict) or k not in node:
            raise ConfigError("unknown parameter path", parameter)
        node = node[k]
    leaf = keys[-1]
    if not isinstance(node, dict) or leaf not in node:
        raise ConfigError("unknown parameter path", parameter)
    current = node[leaf]
    # An echo workload stores response_bytes as null; it is still a byte count.
    nullable_count = current is None and leaf.endswith("_bytes")
    if not nullable_count and (isinstance(current, bool) or not isinstance(current, (int, float))):
        raise ConfigError("parameter does not address a numeric field", parameter)
    if nullable_count or isinstance(current, int):
        if float(value) != int(value):
            raise ConfigError(f"integer field cannot take {value!r}", parameter)
        value = int(value)
    node[leaf] = value
    return d


def sweep_label(label: str, value: float) -> str:
    v = float(value)
    return f"{label}@{int(v)}" if v.is_integer() else f"{label}@{v!r}"


def sweep(
    base: Scenario,
    parameter: str,
    values: Iterable[float],
    max_workers: int | None = None,
) -> list[EnergyReport]:
    """One report per value of the dotted ``parameter`` (e.g. ``path.added_delay_s``).

    With ``max_workers`` > 1 the runs are spread over worker processes;
    the result order always follows ``values``.
    """
    base_dict = base.to_dict()
    scenarios = []
    for v in values:
        d = set_parameter(base_dict, parameter, v)
        d["label"] = sweep_label(base.label, v)
        try:
            scenarios.append(Scenario.from_dict(d))
        except InvalidInputError as exc:
            raise ConfigError(str(exc), parameter) from exc
    if max_workers and max_workers > 1 and len(scenarios) > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(simulate, scenarios))
    return [simulate(s) for s in scenarios]
