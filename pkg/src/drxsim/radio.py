"""Four-state DRX radio model and per-interval energy accounting.

The interface sits in continuous reception (CR) while packets flow. Once
traffic stops it falls back through SHORT DRX and LONG DRX to IDLE as the
inactivity timers ``t1 < t2 < t3`` expire. All DRX states and IDLE are
duty-cycled: a wake-up window of ``on_dur`` at ``p_on`` followed by sleep
at ``p_sleep`` for the rest of ``cycle_len``. The energy of a stretch of
time spent in one state is therefore ``P_sleep*T_sleep + P_awake*T_awake``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Literal

from drxsim.errors import InvalidInputError

if TYPE_CHECKING:
    from drxsim.workload import EventTrace

AccountingMode = Literal["average", "exact-cycle"]
ACCOUNTING_MODES: tuple[str, ...] = ("average", "exact-cycle")


class RadioState(enum.Enum):
    CR = "CR"
    SHORT_DRX = "ShortDrx"
    LONG_DRX = "LongDrx"
    IDLE = "Idle"


# Order of the inactivity cascade, most to least power hungry.
CASCADE = (RadioState.CR, RadioState.SHORT_DRX, RadioState.LONG_DRX, RadioState.IDLE)


@dataclass(frozen=True)
class DutyCycle:
    """On/sleep alternation of a DRX (or idle paging) state.

    Attributes:
        cycle_len: Length of one full cycle in seconds.
        on_dur: Awake part of each cycle in seconds; comes first in the cycle.
        p_on: Power drawn while awake, in watts.
        p_sleep: Power drawn while asleep, in watts.
    """

    cycle_len: float
    on_dur: float
    p_on: float
    p_sleep: float

    def __post_init__(self) -> None:
        if not self.cycle_len > 0:
            raise InvalidInputError(f"cycle_len must be > 0, got {self.cycle_len}")
        if not 0 <= self.on_dur <= self.cycle_len:
            raise InvalidInputError(
                f"on_dur must lie in [0, cycle_len], got {self.on_dur}"
            )
        if not 0 <= self.p_sleep <= self.p_on:
            raise InvalidInputError(
                f"need 0 <= p_sleep <= p_on, got p_sleep={self.p_sleep}, p_on={self.p_on}"
            )

    @property
    def cycle_energy(self) -> float:
        return self.p_on * self.on_dur + self.p_sleep * (self.cycle_len - self.on_dur)

    @property
    def avg_power(self) -> float:
        return self.cycle_energy / self.cycle_len

    @property
    def sleep_fraction(self) -> float:
        return (self.cycle_len - self.on_dur) / self.cycle_len

    def cumulative_energy(self, x: float) -> float:
        """Energy of the square wave over ``[0, x]`` with the on-phase first."""
        n = math.floor(x / self.cycle_len)
        r = min(max(x - n * self.cycle_len, 0.0), self.cycle_len)
        on = min(r, self.on_dur)
        return n * self.cycle_energy + on * self.p_on + (r - on) * self.p_sleep


@dataclass(frozen=True)
class FsmTimers:
    """Inactivity thresholds, all measured from the last packet event."""

    t1: float
    t2: float
    t3: float

    def __post_init__(self) -> None:
        if not 0 < self.t1 < self.t2 < self.t3:
            raise InvalidInputError(
                f"timers must satisfy 0 < t1 < t2 < t3, got {self.t1}, {self.t2}, {self.t3}"
            )


@dataclass(frozen=True)
class PowerProfile:
    p_cr: float
    short_drx: DutyCycle
    long_drx: DutyCycle
    idle: DutyCycle
    timers: FsmTimers
    nominal_voltage: float = 3.85

    def __post_init__(self) -> None:
        if not self.nominal_voltage > 0:
            raise InvalidInputError("nominal_voltage must be > 0")
        a_s, a_l, a_i = (self.short_drx.avg_power, self.long_drx.avg_power, self.idle.avg_power)
        if not self.p_cr > a_s > a_l > a_i:
            raise InvalidInputError(
                "average power must strictly decrease CR > ShortDrx > LongDrx > Idle, "
                f"got {self.p_cr}, {a_s}, {a_l}, {a_i}"
            )
        f_s, f_l, f_i = (
            self.short_drx.sleep_fraction,
            self.long_drx.sleep_fraction,
            self.idle.sleep_fraction,
        )
        if not f_i > f_l > f_s:
            raise InvalidInputError(
                "sleep fraction must strictly increase ShortDrx < LongDrx < Idle, "
                f"got {f_s}, {f_l}, {f_i}"
            )

    def duty_cycle(self, state: RadioState) -> DutyCycle | None:
        return {
            RadioState.CR: None,
            RadioState.SHORT_DRX: self.short_drx,
            RadioState.LONG_DRX: self.long_drx,
            RadioState.IDLE: self.idle,
        }[state]

    def avg_power(self, state: RadioState) -> float:
        dc = self.duty_cycle(state)
        return self.p_cr if dc is None else dc.avg_power

    def to_dict(self) -> dict[str, Any]:
        def cyc(dc: DutyCycle) -> dict[str, float]:
            return {"cycle_s": dc.cycle_len, "on_s": dc.on_dur, "p_on_w": dc.p_on, "p_sleep_w": dc.p_sleep}

        return {
            "p_cr_w": self.p_cr,
            "short_drx": cyc(self.short_drx),
            "long_drx": cyc(self.long_drx),
            "idle": cyc(self.idle),
            "timers": {"t1_s": self.timers.t1, "t2_s": self.timers.t2, "t3_s": self.timers.t3},
            "nominal_voltage_v": self.nominal_voltage,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> PowerProfile:
        def cyc(c: dict[str, float]) -> DutyCycle:
            return DutyCycle(c["cycle_s"], c["on_s"], c["p_on_w"], c["p_sleep_w"])

        t = d["timers"]
        return cls(
            p_cr=d["p_cr_w"],
            short_drx=cyc(d["short_drx"]),
            long_drx=cyc(d["long_drx"]),
            idle=cyc(d["idle"]),
            timers=FsmTimers(t["t1_s"], t["t2_s"], t["t3_s"]),
            nominal_voltage=d.get("nominal_voltage_v", 3.85),
        )


@dataclass(frozen=True)
class StateInterval:
    state: RadioState
    start: float
    end: float

    def __post_init__(self) -> None:
        if not self.end > self.start:
            raise InvalidInputError(f"interval needs end > start, got [{self.start}, {self.end}]")

    @property
    def duration(self) -> float:
        return self.end - self.start


def fsm_advance(current: RadioState, last_activity: float, now: float, timers: FsmTimers) -> RadioState:
    """State reached at ``now`` given the time of the last packet.

    The timers are cumulative thresholds on elapsed inactivity, so the
    result depends only on ``now - last_activity``; ``current`` is accepted
    for symmetry with :func:`on_packet`.
    """
    elapsed = now - last_activity
    if elapsed < 0:
        raise InvalidInputError(f"now ({now}) precedes last activity ({last_activity})")
    if elapsed >= timers.t3:
        return RadioState.IDLE
    if elapsed >= timers.t2:
        return RadioState.LONG_DRX
    if elapsed >= timers.t1:
        return RadioState.SHORT_DRX
    return RadioState.CR


def on_packet(current: RadioState, t: float) -> RadioState:
    """Any send or receive promotes the interface to CR.

    The caller records ``t`` as the new last-activity time.
    """
    return RadioState.CR


def build_state_timeline(
    trace: EventTrace, timers: FsmTimers, horizon: float | None = None
) -> list[StateInterval]:
    """Gapless list of state intervals covering ``[0, horizon]``.

    The radio starts in IDLE at t = 0. Adjacent intervals never share a
    state, so a burst of packets closer together than ``t1`` yields one CR
    interval.
    """
    if horizon is None:
        horizon = trace.horizon
    times = [ev.t for ev in trace.events]
    for a, b in zip(times, times[1:]):
        if b < a:
            raise InvalidInputError("trace timestamps must be sorted ascending")
    if times and (times[0] < 0 or times[-1] > horizon):
        raise InvalidInputError("trace timestamps must lie in [0, horizon]")

    out: list[StateInterval] = []

    def push(state: RadioState, a: float, b: float) -> None:
        if b <= a:
            return
        if out and out[-1].state is state and out[-1].end == a:
            out[-1] = StateInterval(state, out[-1].start, b)
        else:
            out.append(StateInterval(state, a, b))

    def settle(last: float | None, a: float, b: float) -> None:
        # Fill [a, b] with the inactivity cascade that began at ``last``.
        if last is None:
            push(RadioState.IDLE, a, b)
            return
        edges = (last, last + timers.t1, last + timers.t2, last + timers.t3, math.inf)
        for state, lo, hi in zip(CASCADE, edges, edges[1:]):
            push(state, max(a, lo), min(b, hi))

    last: float | None = None
    cursor = 0.0
    for t in times:
        settle(last, cursor, t)
        cursor = last = t
    settle(last, cursor, horizon)
    return out


def energy_of_interval(
    interval: StateInterval,
    profile: PowerProfile,
    mode: AccountingMode = "average",
    phase: float = 0.0,
) -> float:
    """Energy in joules spent during ``interval``.

    ``average`` charges the duty cycle's mean power for the whole duration.
    ``exact-cycle`` integrates the on/sleep square wave; ``phase`` is the
    time already spent in the state before ``interval.start`` (0 at state
    entry), which lets a long interval be split without shifting the wave.
    """
    if mode not in ACCOUNTING_MODES:
        raise InvalidInputError(f"unknown accounting mode {mode!r}")
    duration = interval.end - interval.start
    dc = profile.duty_cycle(interval.state)
    if dc is None:
        return profile.p_cr * duration
    if mode == "average":
        return dc.avg_power * duration
    if phase < 0:
        raise InvalidInputError("phase must be >= 0")
    if phase == 0:
        return dc.cumulative_energy(duration)
    return dc.cumulative_energy(phase + duration) - dc.cumulative_energy(phase)


def timeline_energy(
    timeline: list[StateInterval],
    profile: PowerProfile,
    mode: AccountingMode = "average",
    start: float | None = None,
    end: float | None = None,
) -> float:
    """Energy of ``timeline`` restricted to the window ``[start, end]``.

    Intervals cut by the window keep their duty-cycle phase, so summing
    over any partition of the timeline reproduces the whole.
    """
    if not timeline:
        return 0.0
    lo = timeline[0].start if start is None else start
    hi = timeline[-1].end if end is None else end
    parts = []
    for iv in timeline:
        a, b = max(iv.start, lo), min(iv.end, hi)
        if b <= a:
            continue
        piece = StateInterval(iv.state, a, b)
        parts.append(energy_of_interval(piece, profile, mode, phase=a - iv.start))
    return math.fsum(parts)
