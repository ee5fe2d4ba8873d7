"""Point-mass longitudinal vehicle, speed tracking, the no-DSH driver and a fuel proxy."""

from __future__ import annotations

from .scenario import DshConfig, FuelCoeffs, QueueAdvisory, VehicleParams, VehicleState

__all__ = ["VehicleParams", "FuelCoeffs", "track_speed", "baseline_driver",
           "step_vehicle", "fuel_rate"]


def track_speed(state: VehicleState, v_ref: float, params: VehicleParams) -> float:
    """Saturated proportional speed controller; returns an acceleration command."""
    if v_ref < 0:
        raise ValueError("v_ref must be >= 0")
    demand = params.tracking_gain * (v_ref - state.speed)
    return min(max(demand, -params.max_decel), params.max_accel)


def baseline_driver(state: VehicleState, advisory: QueueAdvisory, cfg: DshConfig,
                    params: VehicleParams) -> float:
    """Reference speed of a driver without DSH.

    Cruises at the limit until the queue is within ``perception_range``, then
    demands the queue speed at once and holds it to the end of the queue.
    """
    if state.distance > advisory.queue_end:
        return cfg.speed_limit
    if advisory.queue_start - state.distance < params.perception_range:
        return advisory.queue_speed
    return cfg.speed_limit


def step_vehicle(state: VehicleState, accel_cmd: float, dt: float) -> VehicleState:
    """Semi-implicit Euler step; speed is floored at zero.

    The reported acceleration is the command unless the zero-speed floor bit,
    in which case it is the realised ``-speed / dt``.
    """
    if not dt > 0:
        raise ValueError("dt must be > 0")
    speed = state.speed + accel_cmd * dt
    accel = accel_cmd
    if speed < 0:
        speed = 0.0
        accel = -state.speed / dt
    return VehicleState(distance=state.distance + speed * dt, speed=speed, accel=accel)


def fuel_rate(speed: float, accel: float, coeffs: FuelCoeffs) -> float:
    """Fuel-rate proxy in mL/s. Braking earns no credit."""
    if speed < 0:
        raise ValueError("speed must be >= 0")
    return (coeffs.c0 + coeffs.c1 * speed + coeffs.c2 * speed**3
            + max(0.0, accel) * coeffs.c3 * speed)
