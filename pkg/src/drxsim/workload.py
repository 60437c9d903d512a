"""Client traffic patterns turned into timestamped packet events.

Two client behaviours are modelled: a fixed-period echo style
request/response exchange and a periodic resource download. Transfer times
come from an idealised TCP slow start over a :class:`PathModel`; measured
traces can be loaded instead with :func:`parse_packet_trace`.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Any, Literal, TextIO, Union

from drxsim.errors import InvalidInputError, ParseError, WorkloadOverlapError

Direction = Literal["up", "down"]


@dataclass(frozen=True)
class PathModel:
    """Network path between client and server.

    ``added_delay`` is a tc-style delay applied once in each direction, so
    it counts twice in the round-trip time. ``max_cwnd`` caps the window
    (in segments), e.g. a 64 KB receive window; ``None`` leaves slow start
    unbounded.
    """

    base_rtt: float
    bandwidth: float
    added_delay: float = 0.0
    mss: int = 1460
    init_cwnd: int = 10
    max_cwnd: int | None = None

    def __post_init__(self) -> None:
        if not self.base_rtt > 0:
            raise InvalidInputError("base_rtt must be > 0")
        if not self.added_delay >= 0:
            raise InvalidInputError("added_delay must be >= 0")
        if not self.bandwidth > 0:
            raise InvalidInputError("bandwidth must be > 0")
        if not self.mss > 0:
            raise InvalidInputError("mss must be > 0")
        if not self.init_cwnd >= 1:
            raise InvalidInputError("init_cwnd must be >= 1")
        if self.max_cwnd is not None and self.max_cwnd < self.init_cwnd:
            raise InvalidInputError("max_cwnd must be >= init_cwnd")

    @property
    def effective_rtt(self) -> float:
        return self.base_rtt + 2 * self.added_delay

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "base_rtt_s": self.base_rtt,
            "added_delay_s": self.added_delay,
            "bandwidth_Bps": self.bandwidth,
            "mss_B": self.mss,
            "init_cwnd": self.init_cwnd,
        }
        if self.max_cwnd is not None:
            d["max_cwnd"] = self.max_cwnd
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> PathModel:
        return cls(
            base_rtt=d["base_rtt_s"],
            bandwidth=d["bandwidth_Bps"],
            added_delay=d.get("added_delay_s", 0.0),
            mss=d.get("mss_B", 1460),
            init_cwnd=d.get("init_cwnd", 10),
            max_cwnd=d.get("max_cwnd"),
        )


@dataclass(frozen=True)
class RequestResponse:
    """Client sends ``request_bytes`` every ``period`` and waits for the reply.

    ``response_bytes=None`` means the server echoes the request back.
    """

    period: float
    request_bytes: int
    duration: float
    response_bytes: int | None = None

    def __post_init__(self) -> None:
        _check_cycle(self.period, self.duration)
        if self.request_bytes <= 0 or (self.response_bytes is not None and self.response_bytes <= 0):
            raise InvalidInputError("byte counts must be > 0")

    @property
    def reply_bytes(self) -> int:
        return self.request_bytes if self.response_bytes is None else self.response_bytes

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": "request_response",
            "period_s": self.period,
            "duration_s": self.duration,
            "request_bytes": self.request_bytes,
            "response_bytes": self.response_bytes,
        }


@dataclass(frozen=True)
class Download:
    """Client fetches a ``resource_bytes`` object every ``period``."""

    period: float
    resource_bytes: int
    duration: float
    reuse_connection: bool = False

    def __post_init__(self) -> None:
        _check_cycle(self.period, self.duration)
        if self.resource_bytes <= 0:
            raise InvalidInputError("resource_bytes must be > 0")

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": "download",
            "period_s": self.period,
            "duration_s": self.duration,
            "resource_bytes": self.resource_bytes,
            "reuse_connection": self.reuse_connection,
        }


Workload = Union[RequestResponse, Download]


def _check_cycle(period: float, duration: float) -> None:
    if not period > 0:
        raise InvalidInputError("period must be > 0")
    if not duration >= period:
        raise InvalidInputError("duration must be >= period")


def workload_from_dict(d: dict[str, Any]) -> Workload:
    kind = d.get("kind")
    if kind == "download":
        return Download(
            period=d["period_s"],
            resource_bytes=d["resource_bytes"],
            duration=d["duration_s"],
            reuse_connection=d.get("reuse_connection", False),
        )
    if kind == "request_response":
        return RequestResponse(
            period=d["period_s"],
            request_bytes=d["request_bytes"],
            duration=d["duration_s"],
            response_bytes=d.get("response_bytes"),
        )
    raise InvalidInputError(f"unknown workload kind {kind!r}")


@dataclass(frozen=True)
class PacketEvent:
    t: float
    direction: Direction
    bytes: int

    def __post_init__(self) -> None:
        if self.t < 0:
            raise InvalidInputError("event time must be >= 0")
        if self.direction not in ("up", "down"):
            raise InvalidInputError(f"direction must be 'up' or 'down', got {self.direction!r}")
        if self.bytes <= 0:
            raise InvalidInputError("event bytes must be > 0")


@dataclass(frozen=True)
class EventTrace:
    events: tuple[PacketEvent, ...]
    horizon: float
    metadata: dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        ts = [e.t for e in self.events]
        if any(b < a for a, b in zip(ts, ts[1:])):
            raise InvalidInputError("event timestamps must be non-decreasing")
        if ts and ts[-1] > self.horizon:
            raise InvalidInputError("events must not lie beyond the horizon")

    def __len__(self) -> int:
        return len(self.events)

    @property
    def total_bytes(self) -> int:
        return sum(e.bytes for e in self.events)


def slow_start_rounds(nbytes: int, path: PathModel) -> list[int]:
    """Bytes delivered in each round: the window doubles from ``init_cwnd``."""
    rounds = []
    remaining = nbytes
    cwnd = path.init_cwnd
    while remaining > 0:
        if path.max_cwnd is not None:
            cwnd = min(cwnd, path.max_cwnd)
        chunk = min(remaining, cwnd * path.mss)
        rounds.append(chunk)
        remaining -= chunk
        cwnd *= 2
    return rounds


def transfer_timeline(
    resource_bytes: int, path: PathModel, start: float, handshake: bool = True
) -> list[PacketEvent]:
    """Events for one download starting at ``start``.

    The request is a single up segment at ``start``. Round ``k`` of the
    response lands at ``start + handshake + (k + 1) * rtt + sent / bandwidth``
    where ``sent`` counts bytes delivered so far, including round ``k``.
    """
    if resource_bytes <= 0:
        raise InvalidInputError("resource_bytes must be > 0")
    rtt = path.effective_rtt
    t0 = start + (rtt if handshake else 0.0)
    events = [PacketEvent(start, "up", path.mss)]
    sent = 0
    for k, chunk in enumerate(slow_start_rounds(resource_bytes, path)):
        sent += chunk
        events.append(PacketEvent(t0 + (k + 1) * rtt + sent / path.bandwidth, "down", chunk))
    return events


def _request_response_cycle(w: RequestResponse, path: PathModel, start: float) -> list[PacketEvent]:
    # Request bursts leave one RTT apart; the reply follows the last burst.
    rtt = path.effective_rtt
    events = [
        PacketEvent(start + j * rtt, "up", chunk)
        for j, chunk in enumerate(slow_start_rounds(w.request_bytes, path))
    ]
    t_last_up = events[-1].t
    sent = 0
    for k, chunk in enumerate(slow_start_rounds(w.reply_bytes, path)):
        sent += chunk
        events.append(PacketEvent(t_last_up + (k + 1) * rtt + sent / path.bandwidth, "down", chunk))
    return events


def cycle_count(workload: Workload) -> int:
    """Cycles start at 0, period, 2*period, ... strictly before the duration."""
    n = math.ceil(workload.duration / workload.period - 1e-9)
    return max(n, 1)


def generate_trace(workload: Workload, path: PathModel) -> EventTrace:
    """Synthesise the packet events of ``workload`` over ``path``.

    Raises:
        WorkloadOverlapError: a cycle's last event falls after the next
            cycle's start, or after the end of the run.
    """
    events: list[PacketEvent] = []
    n = cycle_count(workload)
    for i in range(n):
        start = i * workload.period
        if isinstance(workload, Download):
            handshake = not (workload.reuse_connection and i > 0)
            cycle = transfer_timeline(workload.resource_bytes, path, start, handshake)
        else:
            cycle = _request_response_cycle(workload, path, start)
        deadline = min((i + 1) * workload.period, workload.duration)
        if cycle[-1].t > deadline:
            raise WorkloadOverlapError(
                f"cycle {i} starting at {start:g} s ends at {cycle[-1].t:g} s, "
                f"past its deadline {deadline:g} s"
            )
        events.extend(cycle)
    return EventTrace(tuple(events), workload.duration)


def _read_text(text: str | TextIO) -> str:
    return text if isinstance(text, str) else text.read()


def parse_packet_trace(text: str | TextIO, horizon: float | None = None) -> EventTrace:
    """Parse ``t_seconds,dir,bytes`` CSV into an :class:`EventTrace`.

    A header row and ``#`` comment lines are allowed. Out-of-order rows are
    sorted (stably) and flagged with ``metadata["reordered"] = True``.
    """
    events: list[PacketEvent] = []
    seen_data = False
    reader = csv.reader(io.StringIO(_read_text(text)))
    for lineno, row in enumerate(reader, start=1):
        if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
            continue
        fields = [f.strip() for f in row]
        if not seen_data and fields[0].lower() in ("t_seconds", "t", "time"):
            seen_data = True
            continue
        seen_data = True
        if len(fields) != 3:
            raise ParseError(f"expected 3 fields, got {len(fields)}", lineno)
        try:
            t = float(fields[0])
            nbytes = int(fields[2])
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        if not math.isfinite(t) or t < 0:
            raise ParseError(f"bad timestamp {fields[0]!r}", lineno)
        if fields[1] not in ("up", "down"):
            raise ParseError(f"direction must be up or down, got {fields[1]!r}", lineno)
        if nbytes <= 0:
            raise ParseError("bytes must be > 0", lineno)
        events.append(PacketEvent(t, fields[1], nbytes))  # type: ignore[arg-type]

    metadata: dict[str, Any] = {"reordered": False}
    if any(b.t < a.t for a, b in zip(events, events[1:])):
        events.sort(key=lambda e: e.t)
        metadata["reordered"] = True
    last = events[-1].t if events else 0.0
    if horizon is None:
        horizon = last
    elif horizon < last:
        raise InvalidInputError(f"horizon {horizon} precedes the last event at {last}")
    return EventTrace(tuple(events), horizon, metadata)


def format_packet_trace(trace: EventTrace) -> str:
    lines = ["t_seconds,dir,bytes"]
    lines += [f"{e.t!r},{e.direction},{e.bytes}" for e in trace.events]
    return "\n".join(lines) + "\n"
