"""Domain types and the scenario config loader.

Scenario files are plain UTF-8 text, one ``key = value`` pair per line::

    # canonical MIL run
    mode = step
    initial_speed = 20
    route_length = 8000
    dt = 0.1

    advisory.queue_start = 5200
    advisory.queue_end = 5700
    advisory.queue_speed = 5
    advisory.comm_range = 1000

    dsh.decel_step = 1
    dsh.accel_step = 1
    dsh.speed_limit = 20

Blank lines and ``#`` comments (whole-line or trailing) are ignored. Nested
fields use dotted keys (``vehicle.max_decel``, ``fuel.c2``). Every dataclass
below checks its invariants at construction, so a loaded config is always
valid.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, fields
from pathlib import Path


class ValidationError(ValueError):
    """A value violates a type invariant. ``field`` names the culprit."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class ScenarioParseError(ValueError):
    """Malformed scenario file. ``line`` is 1-based, or None for whole-file errors."""

    def __init__(self, message: str, line: int | None = None, key: str | None = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
        self.key = key


def _require(ok: bool, name: str, message: str) -> None:
    if not ok:
        raise ValidationError(name, message)


def _finite(*pairs: tuple[str, float]) -> None:
    for name, value in pairs:
        _require(isinstance(value, (int, float)) and math.isfinite(value),
                 name, f"must be a finite number, got {value!r}")


class Mode(str, enum.Enum):
    NO_DSH = "no-dsh"
    STEP = "step"
    STEP_SIGMOID = "step-sigmoid"
    SINGLE_SIGMOID = "single-sigmoid"

    @classmethod
    def parse(cls, text: str) -> "Mode":
        """Accept ``step-sigmoid``, ``StepSigmoid``, ``step_sigmoid`` and so on."""
        key = text.strip().replace("_", "-").lower()
        aliases = {"nodsh": "no-dsh", "stepsigmoid": "step-sigmoid",
                   "singlesigmoid": "single-sigmoid"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            choices = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown mode {text!r} (choose from {choices})") from None

    @property
    def is_dsh(self) -> bool:
        return self is not Mode.NO_DSH


# Presentation order of the four-panel comparison figure.
MODE_ORDER = (Mode.NO_DSH, Mode.STEP, Mode.SINGLE_SIGMOID, Mode.STEP_SIGMOID)


@dataclass(frozen=True)
class QueueAdvisory:
    """Queue geometry and speed as broadcast by the roadside unit (meters, m/s)."""

    queue_start: float
    queue_end: float
    queue_speed: float
    comm_range: float

    def __post_init__(self):
        _finite(("queue_start", self.queue_start), ("queue_end", self.queue_end),
                ("queue_speed", self.queue_speed))
        _require(self.queue_end > self.queue_start, "queue_end",
                 f"must exceed queue_start ({self.queue_end} <= {self.queue_start})")
        _require(self.queue_speed >= 0, "queue_speed", "must be >= 0")
        _require(isinstance(self.comm_range, (int, float)) and self.comm_range > 0,
                 "comm_range", "must be > 0")

    @property
    def queue_length(self) -> float:
        return self.queue_end - self.queue_start


@dataclass(frozen=True)
class DshConfig:
    """Per-segment speed steps (m/s, not m/s^2), speed limit and sigmoid slopes (1/m)."""

    decel_step: float
    accel_step: float
    speed_limit: float
    k_step_sigmoid: float = 0.09
    k_single_sigmoid: float = 0.009

    def __post_init__(self):
        _finite(*((f.name, getattr(self, f.name)) for f in fields(self)))
        for name in ("decel_step", "accel_step", "speed_limit",
                     "k_step_sigmoid", "k_single_sigmoid"):
            _require(getattr(self, name) > 0, name, "must be > 0")
        _require(self.k_single_sigmoid < self.k_step_sigmoid, "k_single_sigmoid",
                 "must be smaller than k_step_sigmoid")


@dataclass(frozen=True)
class VehicleState:
    distance: float
    speed: float
    accel: float = 0.0

    def __post_init__(self):
        _require(self.speed >= 0, "speed", "must be >= 0")


@dataclass(frozen=True)
class VehicleParams:
    """Longitudinal limits, tracking gain (1/s) and the baseline driver's perception range (m)."""

    max_accel: float = 2.0
    max_decel: float = 3.0
    tracking_gain: float = 0.5
    perception_range: float = 150.0

    def __post_init__(self):
        _finite(*((f.name, getattr(self, f.name)) for f in fields(self)))
        for f in fields(self):
            _require(getattr(self, f.name) > 0, f.name, "must be > 0")


@dataclass(frozen=True)
class FuelCoeffs:
    """Coefficients of the fuel-rate proxy, mL/s.

    rate = c0 + c1*v + c2*v**3 + max(0, a)*c3*v
    """

    c0: float = 0.3
    c1: float = 0.02
    c2: float = 2e-5
    c3: float = 0.05

    def __post_init__(self):
        _finite(*((f.name, getattr(self, f.name)) for f in fields(self)))
        for f in fields(self):
            _require(getattr(self, f.name) >= 0, f.name, "must be >= 0")


@dataclass(frozen=True)
class ScenarioConfig:
    advisory: QueueAdvisory
    dsh: DshConfig
    initial_speed: float
    route_length: float
    mode: Mode = Mode.STEP
    dt: float = 0.1
    vehicle: VehicleParams = field(default_factory=VehicleParams)
    fuel: FuelCoeffs = field(default_factory=FuelCoeffs)
    seed: int = 0

    def __post_init__(self):
        _finite(("initial_speed", self.initial_speed), ("route_length", self.route_length),
                ("dt", self.dt))
        _require(isinstance(self.mode, Mode), "mode", f"must be a Mode, got {self.mode!r}")
        _require(0 < self.dt <= 0.1, "dt", f"must satisfy 0 < dt <= 0.1, got {self.dt}")
        _require(self.initial_speed >= 0, "initial_speed", "must be >= 0")
        _require(self.initial_speed <= self.dsh.speed_limit, "initial_speed",
                 f"exceeds speed_limit {self.dsh.speed_limit}")
        # the run starts at distance 0 and must approach the queue from upstream
        _require(self.advisory.queue_start > 0, "advisory.queue_start", "must be > 0")
        _require(self.route_length > self.advisory.queue_end, "route_length",
                 "must exceed advisory.queue_end")
        _require(isinstance(self.seed, int), "seed", "must be an integer")

    def replace(self, **changes) -> "ScenarioConfig":
        import dataclasses
        return dataclasses.replace(self, **changes)


# --- file format -----------------------------------------------------------

_SECTIONS = {"advisory": QueueAdvisory, "dsh": DshConfig,
             "vehicle": VehicleParams, "fuel": FuelCoeffs}
_TOP_FLOATS = ("initial_speed", "route_length", "dt")
_TOP_KEYS = _TOP_FLOATS + ("mode", "seed")


def _known_keys() -> set[str]:
    keys = set(_TOP_KEYS)
    for prefix, cls in _SECTIONS.items():
        keys.update(f"{prefix}.{f.name}" for f in fields(cls))
    return keys


def parse_scenario(text: str) -> ScenarioConfig:
    """Parse scenario text. Raises ScenarioParseError or ValidationError."""
    known = _known_keys()
    raw: dict[str, tuple[str, int]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioParseError(f"expected 'key = value', got {line!r}", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in known:
            raise ScenarioParseError(f"unknown key {key!r}", lineno, key)
        if key in raw:
            raise ScenarioParseError(f"duplicate key {key!r} (first on line {raw[key][1]})",
                                     lineno, key)
        if not value:
            raise ScenarioParseError(f"missing value for {key!r}", lineno, key)
        raw[key] = (value, lineno)

    def number(key: str) -> float:
        value, lineno = raw[key]
        try:
            return float(value)
        except ValueError:
            raise ScenarioParseError(f"{key}: not a number: {value!r}", lineno, key) from None

    def section(prefix: str):
        cls = _SECTIONS[prefix]
        kwargs = {f.name: number(f"{prefix}.{f.name}")
                  for f in fields(cls) if f"{prefix}.{f.name}" in raw}
        try:
            return cls(**kwargs)
        except TypeError:
            missing = [f"{prefix}.{f.name}" for f in fields(cls)
                       if f"{prefix}.{f.name}" not in raw]
            raise ScenarioParseError(f"missing required key(s): {', '.join(missing)}") from None
        except ValidationError as exc:
            raise ValidationError(f"{prefix}.{exc.field}", str(exc).split(": ", 1)[1]) from None

    for key in ("initial_speed", "route_length"):
        if key not in raw:
            raise ScenarioParseError(f"missing required key: {key}", key=key)

    kwargs: dict = {name: section(name) for name in _SECTIONS
                    if name in ("advisory", "dsh") or any(k.startswith(name + ".") for k in raw)}
    for key in _TOP_FLOATS:
        if key in raw:
            kwargs[key] = number(key)
    if "mode" in raw:
        value, lineno = raw["mode"]
        try:
            kwargs["mode"] = Mode.parse(value)
        except ValueError as exc:
            raise ScenarioParseError(str(exc), lineno, "mode") from None
    if "seed" in raw:
        value, lineno = raw["seed"]
        try:
            kwargs["seed"] = int(value)
        except ValueError:
            raise ScenarioParseError(f"seed: not an integer: {value!r}", lineno, "seed") from None
    return ScenarioConfig(**kwargs)


def load_scenario(path: str | Path) -> ScenarioConfig:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))


def dump_scenario(cfg: ScenarioConfig) -> str:
    """Serialize to the text format; ``parse_scenario(dump_scenario(c)) == c``."""
    lines = [f"mode = {cfg.mode.value}",
             f"initial_speed = {float(cfg.initial_speed)!r}",
             f"route_length = {float(cfg.route_length)!r}",
             f"dt = {float(cfg.dt)!r}",
             f"seed = {cfg.seed}"]
    for prefix in _SECTIONS:
        obj = getattr(cfg, prefix)
        lines.append("")
        lines.extend(f"{prefix}.{f.name} = {float(getattr(obj, f.name))!r}"
                     for f in fields(obj))
    return "\n".join(lines) + "\n"


def save_scenario(cfg: ScenarioConfig, path: str | Path) -> None:
    Path(path).write_text(dump_scenario(cfg), encoding="utf-8")


def canonical_mil(mode: Mode = Mode.STEP, dt: float = 0.1) -> ScenarioConfig:
    """Canonical MIL run: advisory arrives 1000 m ahead of the queue after 4200 m."""
    return ScenarioConfig(
        advisory=QueueAdvisory(queue_start=5200.0, queue_end=5700.0,
                               queue_speed=5.0, comm_range=1000.0),
        dsh=DshConfig(decel_step=1.0, accel_step=1.0, speed_limit=20.0),
        initial_speed=20.0,
        route_length=8000.0,
        mode=mode,
        dt=dt,
    )


def vil_track(mode: Mode = Mode.SINGLE_SIGMOID, dt: float = 0.1) -> ScenarioConfig:
    """Track-test shape: cruise at 20 m/s, slow to a 10 m/s queue, recover to 20 m/s."""
    return ScenarioConfig(
        advisory=QueueAdvisory(queue_start=5200.0, queue_end=5600.0,
                               queue_speed=10.0, comm_range=1200.0),
        dsh=DshConfig(decel_step=1.0, accel_step=1.0, speed_limit=20.0),
        initial_speed=20.0,
        route_length=8000.0,
        mode=mode,
        dt=dt,
    )
