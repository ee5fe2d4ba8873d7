"""Fixed-step simulation loop, run traces and comfort/mobility metrics.

Each step reads the current state, then

1. lets the RSU broadcast and, on first delivery, latches the DSH session,
2. picks the reference speed (advisory, cruise, or the no-DSH driver),
3. turns it into an acceleration command and advances the vehicle,
4. integrates the fuel proxy with the trapezoidal rule.

Row ``i`` of a trace is the state at ``t = i * dt`` together with the
reference computed from that state, so ``v_ref[i]`` is always the advisory
evaluated at ``distance[i]`` once latched.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import BinaryIO, NamedTuple

import numpy as np

from .dynamics import baseline_driver, fuel_rate, step_vehicle, track_speed
from .profiles import DegenerateSession, DshSession, advisory_speed, latch_session
from .scenario import MODE_ORDER, Mode, QueueAdvisory, ScenarioConfig, VehicleState
from .v2x import QueueAdvisoryMessage, append_replay, decode, encode, rsu_deliver

MAX_SIM_TIME = 3600.0
TRACE_COLUMNS = ("t", "distance", "speed", "accel", "v_ref", "advisory_delivered", "fuel_cum")


class SimulationTimeout(RuntimeError):
    """The route end was not reached within the time cap. ``trace`` holds the partial run."""

    def __init__(self, message: str, trace: "SimTrace"):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class SimTrace:
    t: np.ndarray
    distance: np.ndarray
    speed: np.ndarray
    accel: np.ndarray
    v_ref: np.ndarray
    advisory_delivered: np.ndarray
    fuel_cum: np.ndarray
    dt: float
    session: DshSession | None = None
    advisory: QueueAdvisory | None = None

    def __len__(self) -> int:
        return len(self.t)

    @property
    def latch_index(self) -> int | None:
        hits = np.flatnonzero(self.advisory_delivered)
        return int(hits[0]) if hits.size else None

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for row in zip(self.t, self.distance, self.speed, self.accel, self.v_ref,
                       self.advisory_delivered, self.fuel_cum):
            writer.writerow([f"{row[0]:.9g}", f"{row[1]:.9g}", f"{row[2]:.9g}",
                             f"{row[3]:.9g}", f"{row[4]:.9g}", int(row[5]), f"{row[6]:.9g}"])
        return buf.getvalue()

    def write_csv(self, path: str | Path) -> None:
        Path(path).write_text(self.to_csv(), encoding="utf-8")


@dataclass(frozen=True)
class MetricsReport:
    peak_decel: float
    rms_jerk: float
    travel_time: float
    fuel_total: float
    tracking_rmse: float

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {value}")

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"


class RunResult(NamedTuple):
    trace: SimTrace
    metrics: MetricsReport


def _tracking_start(trace: SimTrace, cfg: ScenarioConfig) -> int:
    if cfg.mode.is_dsh:
        start = trace.latch_index
    else:
        gap = cfg.advisory.queue_start - trace.distance
        seen = np.flatnonzero(gap < cfg.vehicle.perception_range)
        start = int(seen[0]) if seen.size else None
    return len(trace) if start is None else start


def compute_metrics(trace: SimTrace, cfg: ScenarioConfig) -> MetricsReport:
    jerk = np.diff(trace.accel) / trace.dt
    start = _tracking_start(trace, cfg)
    err = trace.v_ref[start:] - trace.speed[start:]
    return MetricsReport(
        peak_decel=float(max(0.0, -trace.accel.min())),
        rms_jerk=float(np.sqrt(np.mean(jerk**2))) if jerk.size else 0.0,
        travel_time=float(trace.t[-1]),
        fuel_total=float(trace.fuel_cum[-1]),
        tracking_rmse=float(np.sqrt(np.mean(err**2))) if err.size else 0.0,
    )


def run_scenario(cfg: ScenarioConfig, replay: BinaryIO | None = None,
                 max_time: float = MAX_SIM_TIME) -> RunResult:
    """Simulate one vehicle over the route.

    Frames delivered to the vehicle are appended to ``replay`` when given.
    Raises SimulationTimeout if the route end is not reached by ``max_time``.
    """
    dt, dsh, params, mode = cfg.dt, cfg.dsh, cfg.vehicle, cfg.mode
    state = VehicleState(distance=0.0, speed=float(cfg.initial_speed), accel=0.0)
    session: DshSession | None = None
    advisory: QueueAdvisory | None = None
    rows: list[tuple] = []
    fuel = 0.0
    prev_rate = None
    i = 0
    while True:
        t = i * dt
        if advisory is None:
            msg = QueueAdvisoryMessage.from_advisory(cfg.advisory, msg_id=(i + 1) % 2**32,
                                                     timestamp_ms=round(t * 1000))
            frame = encode(msg)
            if rsu_deliver(state, msg) is not None:
                if replay is not None:
                    append_replay(replay, frame)
                advisory = decode(frame).advisory()
                if mode.is_dsh:
                    try:
                        session = latch_session(state, advisory, dsh)
                    except DegenerateSession as exc:
                        session = exc.session

        if not mode.is_dsh:
            v_ref = baseline_driver(state, cfg.advisory, dsh, params)
        elif session is not None:
            v_ref = advisory_speed(mode, session, advisory, dsh, state.distance)
        else:
            v_ref = dsh.speed_limit

        rate = fuel_rate(state.speed, state.accel, cfg.fuel)
        if prev_rate is not None:
            fuel += 0.5 * dt * (prev_rate + rate)
        prev_rate = rate
        rows.append((t, state.distance, state.speed, state.accel, v_ref,
                     advisory is not None, fuel))

        if state.distance >= cfg.route_length:
            break
        if t > max_time:
            raise SimulationTimeout(
                f"route end not reached after {max_time:g} s "
                f"(distance {state.distance:.1f} of {cfg.route_length:g} m)",
                _build_trace(rows, dt, session, advisory))
        state = step_vehicle(state, track_speed(state, v_ref, params), dt)
        i += 1

    trace = _build_trace(rows, dt, session, advisory)
    return RunResult(trace, compute_metrics(trace, cfg))


def _build_trace(rows, dt, session, advisory) -> SimTrace:
    cols = list(zip(*rows))
    return SimTrace(
        t=np.array(cols[0]), distance=np.array(cols[1]), speed=np.array(cols[2]),
        accel=np.array(cols[3]), v_ref=np.array(cols[4]),
        advisory_delivered=np.array(cols[5], dtype=bool), fuel_cum=np.array(cols[6]),
        dt=dt, session=session, advisory=advisory,
    )


def compare_modes(cfg: ScenarioConfig) -> dict[Mode, RunResult]:
    """Run all four modes on the same scenario, in figure order."""
    return {mode: run_scenario(cfg.replace(mode=mode)) for mode in MODE_ORDER}


def summary_csv(results: dict[Mode, RunResult]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    names = list(MetricsReport.__dataclass_fields__)
    writer.writerow(["mode", *names])
    for mode, result in results.items():
        writer.writerow([mode.value, *(f"{getattr(result.metrics, n):.9g}" for n in names)])
    return buf.getvalue()
