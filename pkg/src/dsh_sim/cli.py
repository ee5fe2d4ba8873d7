"""Command-line front end.

::

    dsh-sim run --scenario mil.cfg --mode single-sigmoid --out out/ --plot
    dsh-sim compare --scenario mil.cfg --out out/
    dsh-sim encode --queue-start-m 5200 --queue-end-m 5700 --queue-speed-mps 5 --comm-range-m 1000
    dsh-sim decode 01000000...

Exit codes: 0 ok, 1 config or codec error, 2 simulation timeout, 3 I/O failure.
``run`` prints exactly the metrics JSON on stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import string
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from .engine import RunResult, SimulationTimeout, compare_modes, run_scenario, summary_csv
from .scenario import Mode, ScenarioConfig, ScenarioParseError, ValidationError, load_scenario
from .v2x import LengthError, QueueAdvisoryMessage, decode, encode

EXIT_OK, EXIT_CONFIG, EXIT_TIMEOUT, EXIT_IO = 0, 1, 2, 3


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunArtifacts:
    trace_csv_path: Path
    metrics_json_path: Path
    plot_svg_path: Path | None = None


def _load(scenario_path, mode: Mode | None = None, dt: float | None = None) -> ScenarioConfig:
    try:
        cfg = load_scenario(scenario_path)
        changes = {}
        if mode is not None:
            changes["mode"] = mode
        if dt is not None:
            changes["dt"] = dt
        return cfg.replace(**changes) if changes else cfg
    except (OSError, ScenarioParseError, ValidationError) as exc:
        raise ConfigError(f"{scenario_path}: {exc}") from exc


def _write_run(result: RunResult, mode: Mode, cfg: ScenarioConfig, out_dir: Path,
               plot: bool) -> RunArtifacts:
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{mode.value}_trace.csv"
    json_path = out_dir / f"{mode.value}_metrics.json"
    result.trace.write_csv(csv_path)
    json_path.write_text(result.metrics.to_json(), encoding="utf-8")
    svg_path = None
    if plot:
        from .plotting import save_trace_svg
        svg_path = out_dir / f"{mode.value}_speed.svg"
        save_trace_svg(result.trace, cfg.dsh.speed_limit, mode, svg_path)
    return RunArtifacts(csv_path, json_path, svg_path)


def cmd_run(scenario_path, mode: Mode | None, out_dir, plot: bool = False,
            dt: float | None = None, replay_path=None) -> tuple[RunArtifacts, RunResult]:
    cfg = _load(scenario_path, mode, dt)
    if replay_path is not None:
        with open(replay_path, "wb") as replay:
            result = run_scenario(cfg, replay=replay)
    else:
        result = run_scenario(cfg)
    return _write_run(result, cfg.mode, cfg, Path(out_dir), plot), result


def cmd_compare(scenario_path, out_dir, dt: float | None = None):
    """Run every mode; write per-mode artifacts, ``compare.svg`` and ``summary.csv``."""
    from .plotting import save_comparison_svg

    cfg = _load(scenario_path, dt=dt)
    out_dir = Path(out_dir)
    results = compare_modes(cfg)
    artifacts = {mode: _write_run(result, mode, cfg, out_dir, plot=True)
                 for mode, result in results.items()}
    summary_path = out_dir / "summary.csv"
    summary_path.write_text(summary_csv(results), encoding="utf-8")
    save_comparison_svg(results, cfg.dsh.speed_limit, out_dir / "compare.svg")
    return artifacts, summary_path, results


def _parse_hex(text: str) -> bytes:
    text = "".join(text.split())
    if any(c not in string.hexdigits for c in text):
        raise ValueError("input is not hexadecimal")
    if len(text) % 2:
        raise LengthError(f"odd number of hex digits ({len(text)}), frame truncated")
    return bytes.fromhex(text)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dsh-sim",
                                     description="Dynamic speed harmonization simulator")
    sub = parser.add_subparsers(dest="command", required=True)
    default_out = os.environ.get("DSH_SIM_OUT", "out")

    run = sub.add_parser("run", help="simulate one mode")
    run.add_argument("--scenario", required=True)
    run.add_argument("--mode", type=Mode.parse, default=None,
                     help="no-dsh, step, step-sigmoid or single-sigmoid (default: from scenario)")
    run.add_argument("--out", default=default_out)
    run.add_argument("--plot", action="store_true", help="also write an SVG speed plot")
    run.add_argument("--dt", type=float, default=None)
    run.add_argument("--replay", default=None, help="write delivered frames to this log")

    cmp_ = sub.add_parser("compare", help="simulate all four modes")
    cmp_.add_argument("--scenario", required=True)
    cmp_.add_argument("--out", default=default_out)
    cmp_.add_argument("--dt", type=float, default=None)

    enc = sub.add_parser("encode", help="print the hex frame for an advisory message")
    enc.add_argument("--msg-id", type=int, default=0)
    enc.add_argument("--timestamp-ms", type=int, default=0)
    enc.add_argument("--queue-start-m", type=float, required=True)
    enc.add_argument("--queue-end-m", type=float, required=True)
    enc.add_argument("--queue-speed-mps", type=float, required=True)
    enc.add_argument("--comm-range-m", type=float, required=True)

    dec = sub.add_parser("decode", help="print the fields of a hex frame as JSON")
    dec.add_argument("frame", help="hex string (whitespace ignored)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            _, result = cmd_run(args.scenario, args.mode, args.out, args.plot, args.dt,
                                args.replay)
            sys.stdout.write(result.metrics.to_json())
        elif args.command == "compare":
            _, summary_path, _ = cmd_compare(args.scenario, args.out, args.dt)
            sys.stdout.write(summary_path.read_text(encoding="utf-8"))
        elif args.command == "encode":
            msg = QueueAdvisoryMessage(args.msg_id, args.timestamp_ms, args.queue_start_m,
                                       args.queue_end_m, args.queue_speed_mps, args.comm_range_m)
            print(encode(msg).hex())
        elif args.command == "decode":
            print(json.dumps(asdict(decode(_parse_hex(args.frame)))))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (LengthError, ValidationError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SimulationTimeout as exc:
        print(f"simulation timeout: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
