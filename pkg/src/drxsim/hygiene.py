"""Cleaning and summarising long battery/current measurement runs.

Measurements taken on a real phone are polluted by start-up activity and
by sporadic background work. The helpers here drop a warm-up prefix, cut
the remainder into fixed slots and keep the slot with the lowest mean
(interference can only add consumption), and put uptimes from runs that
started at different charge levels on a common footing.
"""

from __future__ import annotations

import math

import io
import json
from dataclasses import dataclass, field
from typing import Any, TextIO

import numpy as np

from drxsim.errors import EmptySeriesError, InsufficientDataError, InvalidInputError, ParseError

MAH_TO_COULOMB = 3.6


@dataclass(frozen=True, eq=False)
class SampleSeries:
    """Timestamped scalar samples with strictly increasing times."""

    t: np.ndarray
    values: np.ndarray
    unit: str = ""
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        t = np.asarray(self.t, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.ndim != 1 or t.shape != v.shape:
            raise InvalidInputError("t and values must be 1-D arrays of equal length")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise InvalidInputError("sample timestamps must be strictly increasing")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.t.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SampleSeries):
            return NotImplemented
        return (
            self.unit == other.unit
            and np.array_equal(self.t, other.t)
            and np.array_equal(self.values, other.values)
        )

    @property
    def span(self) -> float:
        return float(self.t[-1] - self.t[0]) if len(self) else 0.0


@dataclass(frozen=True)
class SlotStat:
    slot_index: int
    start: float
    end: float
    mean_value: float
    sample_count: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "slot_index": self.slot_index,
            "start_s": self.start,
            "end_s": self.end,
            "mean_value": self.mean_value,
            "sample_count": self.sample_count,
        }


def discard_warmup(series: SampleSeries, warmup: float) -> SampleSeries:
    """Drop samples with ``t < warmup`` and shift the rest so they start at 0."""
    if warmup < 0:
        raise InvalidInputError("warmup must be >= 0")
    if len(series) == 0 or warmup >= series.t[-1] and warmup > 0:
        raise EmptySeriesError(f"warm-up of {warmup:g} s leaves no samples")
    keep = series.t >= warmup
    return SampleSeries(series.t[keep] - warmup, series.values[keep], series.unit, dict(series.metadata))


def slot_stats(series: SampleSeries, slot_len: float) -> list[SlotStat]:
    """Mean of every full ``[i*slot_len, (i+1)*slot_len)`` slot in ``[0, t_last)``.

    A trailing partial slot is dropped; slots holding no samples are skipped.
    """
    if not slot_len > 0:
        raise InvalidInputError("slot_len must be > 0")
    if len(series) == 0:
        raise EmptySeriesError("series is empty")
    n_slots = int(np.floor(series.t[-1] / slot_len))
    edges = np.arange(n_slots + 1) * slot_len
    # side="left" puts a sample sitting on an edge into the slot that edge opens
    idx = np.searchsorted(series.t, edges, side="left")
    stats = []
    for i in range(n_slots):
        lo, hi = idx[i], idx[i + 1]
        if hi > lo:
            # fsum keeps the mean independent of summation order
            mean = math.fsum(series.values[lo:hi].tolist()) / int(hi - lo)
            stats.append(SlotStat(i, float(edges[i]), float(edges[i + 1]), mean, int(hi - lo)))
    return stats


def slot_min_mean(series: SampleSeries, slot_len: float) -> tuple[SlotStat, list[SlotStat]]:
    """Pick the full slot with the lowest mean value (earliest slot on ties)."""
    stats = slot_stats(series, slot_len)
    if not stats:
        raise InsufficientDataError(f"no full slot of {slot_len:g} s fits in the series")
    best = min(stats, key=lambda s: (s.mean_value, s.slot_index))
    return best, stats


def normalize_uptime(uptime: float, initial_charge: float, reference_charge: float) -> float:
    """Rescale an uptime to what it would be had the run started at ``reference_charge``."""
    if not (initial_charge > 0 and reference_charge > 0):
        raise InvalidInputError("charges must be > 0")
    return uptime * reference_charge / initial_charge


def _as_charge_mah(series: SampleSeries, capacity: float | None) -> np.ndarray:
    if series.unit in ("battery_%", "%"):
        if capacity is None:
            raise InvalidInputError("a percentage series needs the battery capacity")
        return series.values / 100.0 * capacity
    if series.unit == "mAh":
        return series.values
    raise InvalidInputError(f"expected a battery_% or mAh series, got unit {series.unit!r}")


def discharge_to_power(series: SampleSeries, capacity: float | None, voltage: float) -> SampleSeries:
    """Power drawn between consecutive battery readings, placed at interval midpoints.

    Segments where the level rises (the phone was charging) are left out and
    their indices listed in ``metadata["excluded_segments"]``.
    """
    if capacity is not None and not capacity > 0:
        raise InvalidInputError("capacity must be > 0")
    if not voltage > 0:
        raise InvalidInputError("voltage must be > 0")
    q = _as_charge_mah(series, capacity)
    dq = np.diff(q)
    dt = np.diff(series.t)
    ok = dq <= 0
    power = -dq[ok] / dt[ok] * MAH_TO_COULOMB * voltage
    mid = (series.t[:-1] + series.t[1:])[ok] / 2
    excluded = np.flatnonzero(~ok).tolist()
    meta: dict[str, Any] = {"excluded_segments": excluded}
    if excluded:
        meta["warning"] = f"{len(excluded)} charging segment(s) excluded"
    return SampleSeries(mid, power, "W", meta)


def discharge_uptime(series: SampleSeries, capacity: float | None = None, empty_level: float = 0.0) -> float:
    """Time from the first sample until the charge first reaches ``empty_level``.

    The crossing is located by linear interpolation between readings.
    Without ``capacity`` a percentage series is read in percent.
    """
    q = series.values if capacity is None else _as_charge_mah(series, capacity)
    below = np.flatnonzero(q <= empty_level)
    if below.size == 0:
        raise InsufficientDataError("series never reaches the empty level")
    j = int(below[0])
    if j == 0:
        return 0.0
    t0, t1, q0, q1 = series.t[j - 1], series.t[j], q[j - 1], q[j]
    return float(t0 + (q0 - empty_level) / (q0 - q1) * (t1 - t0) - series.t[0])


def parse_sample_series(text: str | TextIO) -> SampleSeries:
    """Parse ``t_seconds,value`` CSV whose unit sits in a ``# unit: X`` comment."""
    raw = text if isinstance(text, str) else text.read()
    unit = ""
    ts: list[float] = []
    vs: list[float] = []
    for lineno, line in enumerate(io.StringIO(raw), start=1):
        s = line.strip()
        if not s:
            continue
        if s.startswith("#"):
            key, _, val = s[1:].partition(":")
            if key.strip().lower() == "unit":
                unit = val.strip()
            continue
        parts = [p.strip() for p in s.split(",")]
        if not ts and parts[0].lower() in ("t_seconds", "t", "time"):
            continue
        if len(parts) != 2:
            raise ParseError(f"expected 2 fields, got {len(parts)}", lineno)
        try:
            t, v = float(parts[0]), float(parts[1])
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        if ts and t == ts[-1]:
            raise ParseError(f"duplicate timestamp {t!r}", lineno)
        if ts and t < ts[-1]:
            raise ParseError(f"timestamp {t!r} goes backwards", lineno)
        ts.append(t)
        vs.append(v)
    if not ts:
        raise EmptySeriesError("no samples in input")
    return SampleSeries(np.array(ts), np.array(vs), unit)


def format_sample_series(series: SampleSeries) -> str:
    lines = [f"# unit: {series.unit}", "t_seconds,value"]
    lines += [f"{float(t)!r},{float(v)!r}" for t, v in zip(series.t, series.values)]
    return "\n".join(lines) + "\n"


def analyze_series(series: SampleSeries, slot_len: float, warmup: float = 0.0) -> dict[str, Any]:
    """Warm-up discard followed by slot-minimum selection, as a JSON-ready dict."""
    trimmed = discard_warmup(series, warmup)
    best, stats = slot_min_mean(trimmed, slot_len)
    return {
        "selected_slot": best.to_dict(),
        "slots": [s.to_dict() for s in stats],
        "parameters": {"slot_len_s": slot_len, "warmup_s": warmup, "unit": series.unit},
    }


def analysis_json(result: dict[str, Any]) -> str:
    return json.dumps(result, indent=2) + "\n"
