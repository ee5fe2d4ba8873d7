"""Exit criteria. Each test logs a PASS/FAIL line shown in the pytest terminal summary."""

import math
import struct
import time

import numpy as np
import pytest

from dsh_sim.engine import SimulationTimeout, compare_modes, run_scenario
from dsh_sim.profiles import (DshSession, advisory_speed, single_sigmoid_approach_raw,
                              single_sigmoid_centers, step_advisory, step_sigmoid_advisory)
from dsh_sim.scenario import MODE_ORDER, Mode, QueueAdvisory, VehicleState, canonical_mil, vil_track
from dsh_sim.v2x import QueueAdvisoryMessage, decode, encode, rsu_deliver

DSH_MODES = (Mode.STEP, Mode.STEP_SIGMOID, Mode.SINGLE_SIGMOID)


@pytest.fixture(scope="module")
def mil():
    return compare_modes(canonical_mil())


def _logistic(x):
    return 1.0 / (1.0 + math.exp(-x))


def test_c1_canonical_queue_and_recovery(record):
    cfg = canonical_mil()
    q, limit = cfg.advisory.queue_speed, cfg.dsh.speed_limit
    for mode in DSH_MODES:
        start = time.perf_counter()
        tr = run_scenario(cfg.replace(mode=mode)).trace
        elapsed = time.perf_counter() - start
        window = (tr.distance >= cfg.advisory.queue_start + 50) & (tr.distance <= cfg.advisory.queue_end)
        queue_err = float(np.abs(tr.speed[window] - q).max())
        end_err = abs(tr.speed[-1] - limit)
        record(f"C1 canonical MIL [{mode.value}]",
               window.any() and queue_err <= 0.5 and end_err <= 0.5 and elapsed < 1.0,
               f"max|v-5| in queue={queue_err:.4f}, |v_end-20|={end_err:.2e}, {elapsed:.3f}s")


def test_c2_vil_single_sigmoid(record):
    cfg = vil_track()
    tr = run_scenario(cfg).trace
    s, adv = tr.session, tr.advisory
    d_appr = np.arange(s.d_entry, adv.queue_start, 0.1)
    d_rec = np.arange(adv.queue_end, cfg.route_length, 0.1)
    v_appr = advisory_speed(Mode.SINGLE_SIGMOID, s, adv, cfg.dsh, d_appr)
    v_rec = advisory_speed(Mode.SINGLE_SIGMOID, s, adv, cfg.dsh, d_rec)
    monotone = bool(np.all(np.diff(v_appr) <= 0) and np.all(np.diff(v_rec) >= 0))
    reach = float(v_appr.min())
    c_dec, _ = single_sigmoid_centers(s, adv)
    mid = advisory_speed(Mode.SINGLE_SIGMOID, s, adv, cfg.dsh, c_dec)
    record("C2 VIL single-sigmoid 20->10->20",
           s.v_start == 20.0 and monotone and abs(reach - 10.0) <= 0.1
           and abs(mid - 15.0) <= 1e-6 and v_rec.max() == pytest.approx(20.0, abs=1e-3),
           f"monotone={monotone}, min approach advisory={reach:.4f}, midpoint={mid!r}")


def test_c3_comfort_ordering(record, mil):
    nodsh = mil[Mode.NO_DSH].metrics.peak_decel
    peaks = {m.value: mil[m].metrics.peak_decel for m in DSH_MODES}
    max_decel = canonical_mil().vehicle.max_decel
    record("C3 peak decel NoDsh > every DSH mode, NoDsh == max_decel",
           all(nodsh > p for p in peaks.values()) and nodsh == max_decel,
           f"NoDsh={nodsh!r}, " + ", ".join(f"{k}={v:.3f}" for k, v in peaks.items()))


def test_c4_fuel_similarity(record, mil):
    fuel = {m.value: r.metrics.fuel_total for m, r in mil.items()}
    spread = (max(fuel.values()) - min(fuel.values())) / min(fuel.values())
    record("C4 fuel totals within 10% relative spread", spread < 0.10,
           f"spread={spread:.2%} " + ", ".join(f"{k}={v:.1f}" for k, v in fuel.items()))


def test_c5_step_structure(record):
    cfg = canonical_mil()
    s = DshSession.from_entry(20.0, 4200.0, cfg.advisory, cfg.dsh)
    d = np.arange(s.d_entry, cfg.advisory.queue_start, 0.1)
    plateaus = np.unique(step_advisory(s, cfg.advisory, cfg.dsh, d))
    record("C5 step structure: 15 segments of 66 m, 16 plateaus",
           s.v_diff == 15 and s.n_dec == 15 and s.seg_len_dec == 66 and len(plateaus) == 16,
           f"n_dec={s.n_dec}, seg_len={s.seg_len_dec}, plateaus={len(plateaus)}")


def _random_messages(n, seed=20240611):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        exp = rng.integers(-1074, 1023)
        start = float(rng.choice([-1, 1]) * rng.random() * 2.0 ** exp)
        end = start + abs(start) * float(rng.random()) + 2.0 ** int(rng.integers(-1074, 1000))
        if not end > start or not math.isfinite(end):
            end = math.nextafter(start, math.inf)
        speed_bits = int(rng.integers(0, 0x7F800000))
        range_bits = int(rng.integers(1, 0x7F800000))
        speed = struct.unpack("<f", struct.pack("<I", speed_bits))[0]
        comm = struct.unpack("<f", struct.pack("<I", range_bits))[0]
        out.append(QueueAdvisoryMessage(int(rng.integers(0, 2**32)), int(rng.integers(0, 2**63)) * 2
                                        + int(rng.integers(0, 2)), start, end, speed, comm))
    return out


def test_c6_property_suite(record):
    cfg = canonical_mil()
    adv, dsh = cfg.advisory, cfg.dsh
    s = DshSession.from_entry(20.0, 4200.0, adv, dsh)
    approach = np.arange(s.d_entry, adv.queue_start, 0.1)
    queue = np.arange(adv.queue_start, adv.queue_end, 0.1)
    recovery = np.arange(adv.queue_end, cfg.route_length, 0.1)
    ok_mono = ok_range = True
    for mode in DSH_MODES:
        a = advisory_speed(mode, s, adv, dsh, approach)
        r = advisory_speed(mode, s, adv, dsh, recovery)
        qv = advisory_speed(mode, s, adv, dsh, queue)
        ok_mono &= bool(np.all(np.diff(a) <= 0) and np.all(np.diff(r) >= 0))
        ok_range &= bool(all(np.all((v >= adv.queue_speed) & (v <= 20.0)) for v in (a, r))
                         and np.all(qv == adv.queue_speed))
    record("C6a profile monotonicity (0.1 m sampling)", ok_mono)
    record("C6b profile range clamps", ok_range)

    c_dec, _ = single_sigmoid_centers(s, adv)
    x = np.arange(0.0, 3000.0, 0.1)
    sym = np.abs(single_sigmoid_approach_raw(s, adv, dsh, c_dec + x)
                 + single_sigmoid_approach_raw(s, adv, dsh, c_dec - x) - (20.0 + 5.0)).max()
    record("C6c single-sigmoid point symmetry <= 1e-9", sym <= 1e-9, f"max dev={sym:.2e}")

    worst = -np.inf
    for j in range(s.n_dec):
        d = s.d_entry + (j + 1) * s.seg_len_dec
        bound = dsh.decel_step * sum(
            1 - _logistic(dsh.k_step_sigmoid * (d - c)) if i <= j
            else _logistic(dsh.k_step_sigmoid * (d - c))
            for i, c in enumerate(s.dec_centers))
        gap = abs(step_sigmoid_advisory(s, adv, dsh, d) - step_advisory(s, adv, dsh, d))
        worst = max(worst, gap - bound)
    record("C6d step-sigmoid vs step plateau within logistic-tail bound", worst <= 1e-12,
           f"max(gap - bound)={worst:.2e}")

    msgs = _random_messages(10_000)
    bad = sum(1 for m in msgs if decode(encode(m)) != m or encode(decode(encode(m))) != encode(m)
              or len(encode(m)) != 36)
    record("C6e codec round trip, 10^4 randomized messages", bad == 0, f"failures={bad}")

    msg = QueueAdvisoryMessage.from_advisory(adv)
    delivered = np.array([rsu_deliver(VehicleState(d, 20.0), msg) is not None
                          for d in np.arange(0.0, 8000.0, 0.5)])
    first = int(np.argmax(delivered))
    record("C6f delivery monotone in distance",
           delivered.any() and bool(np.all(delivered[first:])) and not delivered[:first].any())

    same = all(run_scenario(canonical_mil(m)).trace.to_csv()
               == run_scenario(canonical_mil(m)).trace.to_csv() for m in MODE_ORDER)
    record("C6g run determinism (byte-identical CSV)", same)

    shifts = {}
    for m in MODE_ORDER:
        t1 = run_scenario(canonical_mil(m, dt=0.1)).metrics.travel_time
        t2 = run_scenario(canonical_mil(m, dt=0.05)).metrics.travel_time
        shifts[m.value] = abs(t2 - t1) / t1
    record("C6h dt-refinement travel-time shift < 1%", max(shifts.values()) < 0.01,
           ", ".join(f"{k}={v:.3%}" for k, v in shifts.items()))


def test_c7_degenerate_cases(record):
    cfg = canonical_mil()
    flat = cfg.replace(advisory=QueueAdvisory(5200.0, 5700.0, 20.0, 1000.0))
    peaks, const = [], True
    for mode in DSH_MODES:
        result = run_scenario(flat.replace(mode=mode))
        peaks.append(result.metrics.peak_decel)
        tr = result.trace
        const &= tr.session.v_diff == 0 and bool(np.all(tr.v_ref == 20.0))

    s = DshSession.from_entry(5.0, 4200.0, cfg.advisory, cfg.dsh)
    d = np.arange(4200.0, cfg.route_length, 0.1)
    shape_ok = True
    for mode in DSH_MODES:
        v = advisory_speed(mode, s, cfg.advisory, cfg.dsh, d)
        held = v[d <= cfg.advisory.queue_end]
        after = v[d > cfg.advisory.queue_end]
        shape_ok &= bool(np.all(held == 5.0) and np.all(np.diff(after) >= 0)
                         and after[-1] == pytest.approx(20.0, abs=1e-3))
    record("C7a v_diff = 0: constant-then-recovery, peak_decel ~ 0",
           const and shape_ok and max(peaks) <= 1e-9, f"peak_decel={max(peaks):.1e}")

    stuck = cfg.replace(advisory=QueueAdvisory(5200.0, 5700.0, 0.0, 1000.0))
    start = time.perf_counter()
    try:
        run_scenario(stuck)
        timed_out = False
    except SimulationTimeout:
        timed_out = True
    record("C7b queue_speed = 0 ends in timeout", timed_out,
           f"{time.perf_counter() - start:.2f}s wall")
