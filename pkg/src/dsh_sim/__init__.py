"""Dynamic speed harmonization: advisory speed profiles for a connected vehicle
approaching a traffic queue, with a deterministic longitudinal simulator."""

from .dynamics import baseline_driver, fuel_rate, step_vehicle, track_speed
from .engine import (MetricsReport, RunResult, SimTrace, SimulationTimeout, compare_modes,
                     run_scenario)
from .profiles import (DegenerateSession, DshSession, advisory_speed, latch_session,
                       single_sigmoid_advisory, step_advisory, step_sigmoid_advisory)
from .scenario import (DshConfig, FuelCoeffs, Mode, QueueAdvisory, ScenarioConfig,
                       ValidationError, VehicleParams, VehicleState, canonical_mil,
                       load_scenario, vil_track)

__version__ = "0.1.0"

__all__ = [
    "DegenerateSession", "DshConfig", "DshSession", "FuelCoeffs", "MetricsReport", "Mode",
    "QueueAdvisory", "RunResult", "ScenarioConfig", "SimTrace", "SimulationTimeout",
    "ValidationError", "VehicleParams", "VehicleState", "advisory_speed", "baseline_driver",
    "canonical_mil", "compare_modes", "fuel_rate", "latch_session", "load_scenario",
    "run_scenario", "single_sigmoid_advisory", "step_advisory", "step_sigmoid_advisory",
    "step_vehicle", "track_speed", "vil_track",
]
