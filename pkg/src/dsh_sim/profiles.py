"""Distance-based advisory speed generators.

Every generator takes a latched :class:`DshSession` and the distance
travelled ``d`` (a float or an ndarray) and returns the recommended speed.
The road downstream of the latch point splits into three phases:

* approach, ``d_entry <= d < queue_start``: slow from ``v_start`` to the
  queue speed;
* queue, ``queue_start <= d <= queue_end``: hold the queue speed;
* recovery, ``d > queue_end``: climb back to the speed limit over a
  distance equal to the approach distance.

Segments are counted from the latch point over the approach distance, and the
per-segment steps are speed increments in m/s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.special import expit

from .scenario import DshConfig, Mode, QueueAdvisory, VehicleState


class DegenerateSession(ValueError):
    """The vehicle is already at or below queue speed when latching.

    ``session`` still carries the recovery geometry; :func:`advisory_speed`
    holds the queue speed up to ``queue_end`` and then recovers.
    """

    def __init__(self, session: "DshSession"):
        super().__init__(f"no slowdown needed: v_diff = {session.v_diff} <= 0")
        self.session = session


def _segment_length(distance: float, count: int) -> float:
    if count <= 0:
        return distance
    length = math.floor(distance / count)
    # fewer metres than segments: floor would give zero-length segments
    return float(length) if length > 0 else distance / count


@dataclass(frozen=True)
class DshSession:
    v_start: float
    v_diff: float
    d_entry: float
    seg_len_dec: float
    n_dec: int
    seg_len_acc: float
    n_acc: int

    @classmethod
    def from_entry(cls, v_start: float, d_entry: float, advisory: QueueAdvisory,
                   cfg: DshConfig) -> "DshSession":
        """Build the session geometry for a latch at ``d_entry`` (no range check)."""
        approach = advisory.queue_start - d_entry
        if not approach > 0:
            raise ValueError(f"latch point {d_entry} is not upstream of queue_start "
                             f"{advisory.queue_start}")
        v_diff = v_start - advisory.queue_speed
        n_dec = math.ceil(v_diff / cfg.decel_step) if v_diff > 0 else 0
        n_acc = max(0, math.ceil((cfg.speed_limit - advisory.queue_speed) / cfg.accel_step))
        return cls(
            v_start=v_start,
            v_diff=v_diff,
            d_entry=d_entry,
            seg_len_dec=_segment_length(approach, n_dec) if n_dec else 0.0,
            n_dec=n_dec,
            seg_len_acc=_segment_length(approach, n_acc),
            n_acc=n_acc,
        )

    @property
    def degenerate(self) -> bool:
        return self.v_diff <= 0

    @cached_property
    def dec_centers(self) -> np.ndarray:
        """Riser centres of the smoothed staircase during approach."""
        return self.d_entry + (np.arange(self.n_dec) + 0.5) * self.seg_len_dec

    def acc_centers(self, queue_end: float) -> np.ndarray:
        return queue_end + (np.arange(self.n_acc) + 0.5) * self.seg_len_acc


def in_range(distance: float, advisory: QueueAdvisory) -> bool:
    return advisory.queue_start - distance < advisory.comm_range


def latch_session(state: VehicleState, advisory: QueueAdvisory,
                  cfg: DshConfig) -> DshSession | None:
    """Freeze the session at the current state, or None when out of range.

    Raises DegenerateSession when the vehicle is no faster than the queue.
    """
    if not in_range(state.distance, advisory):
        return None
    session = DshSession.from_entry(state.speed, state.distance, advisory, cfg)
    if session.degenerate:
        raise DegenerateSession(session)
    return session


def _prepare(session: DshSession, d):
    d = np.asarray(d, dtype=float)
    if np.any(d < session.d_entry):
        raise ValueError(f"distance precedes the latch point {session.d_entry}")
    return d


def _finish(d: np.ndarray, out: np.ndarray):
    return float(out) if d.ndim == 0 else out


def _compose(d, advisory, approach, recovery):
    return np.where(d < advisory.queue_start, approach,
                    np.where(d <= advisory.queue_end, advisory.queue_speed, recovery))


def _staircase_count(x: np.ndarray, seg_len: float) -> np.ndarray:
    return np.ceil(np.maximum(x, 0.0) / seg_len) if seg_len > 0 else np.zeros_like(x)


def _logistic_sum(d: np.ndarray, centers: np.ndarray, slope: float) -> np.ndarray:
    if centers.size == 0:
        return np.zeros_like(d)
    return expit(slope * (d[..., None] - centers)).sum(axis=-1)


def step_advisory(session: DshSession, advisory: QueueAdvisory, cfg: DshConfig, d):
    """Piecewise-constant staircase, one ``decel_step`` drop per segment."""
    d = _prepare(session, d)
    q = advisory.queue_speed
    drops = _staircase_count(d - session.d_entry, session.seg_len_dec)
    rises = _staircase_count(d - advisory.queue_end, session.seg_len_acc)
    approach = np.maximum(session.v_start - cfg.decel_step * drops, q)
    recovery = np.minimum(q + cfg.accel_step * rises, cfg.speed_limit)
    return _finish(d, _compose(d, advisory, approach, recovery))


def step_sigmoid_advisory(session: DshSession, advisory: QueueAdvisory, cfg: DshConfig, d):
    """Staircase whose risers are logistic transitions of slope ``k_step_sigmoid``."""
    d = _prepare(session, d)
    q = advisory.queue_speed
    k = cfg.k_step_sigmoid
    drop = cfg.decel_step * _logistic_sum(d, session.dec_centers, k)
    rise = cfg.accel_step * _logistic_sum(d, session.acc_centers(advisory.queue_end), k)
    approach = np.maximum(session.v_start - drop, q)
    recovery = np.minimum(q + rise, cfg.speed_limit)
    return _finish(d, _compose(d, advisory, approach, recovery))


def single_sigmoid_centers(session: DshSession, advisory: QueueAdvisory) -> tuple[float, float]:
    """Centres of the deceleration and acceleration logistics."""
    approach = advisory.queue_start - session.d_entry
    return (session.d_entry + advisory.queue_start) / 2, advisory.queue_end + approach / 2


def single_sigmoid_approach_raw(session: DshSession, advisory: QueueAdvisory,
                                cfg: DshConfig, d):
    """Approach logistic before clamping; point-symmetric about its centre."""
    c_dec, _ = single_sigmoid_centers(session, advisory)
    return session.v_start - session.v_diff * expit(cfg.k_single_sigmoid * (np.asarray(d) - c_dec))


def single_sigmoid_advisory(session: DshSession, advisory: QueueAdvisory, cfg: DshConfig, d):
    """One logistic down to the queue speed and one back up to the limit."""
    d = _prepare(session, d)
    q = advisory.queue_speed
    _, c_acc = single_sigmoid_centers(session, advisory)
    approach = np.clip(single_sigmoid_approach_raw(session, advisory, cfg, d), q, session.v_start)
    v_rec = cfg.speed_limit - q
    recovery = np.clip(q + v_rec * expit(cfg.k_single_sigmoid * (d - c_acc)), q, cfg.speed_limit)
    return _finish(d, _compose(d, advisory, approach, recovery))


_GENERATORS = {
    Mode.STEP: step_advisory,
    Mode.STEP_SIGMOID: step_sigmoid_advisory,
    Mode.SINGLE_SIGMOID: single_sigmoid_advisory,
}


def advisory_speed(mode: Mode, session: DshSession, advisory: QueueAdvisory,
                   cfg: DshConfig, d):
    """Dispatch to the generator for ``mode``; degenerate sessions hold the queue speed."""
    try:
        generator = _GENERATORS[mode]
    except KeyError:
        raise ValueError(f"{mode!r} has no advisory profile") from None
    if session.degenerate:
        d = _prepare(session, d)
        recovery = generator(session, advisory, cfg, np.maximum(d, advisory.queue_end))
        return _finish(d, np.where(d <= advisory.queue_end, advisory.queue_speed, recovery))
    return generator(session, advisory, cfg, d)
