"""
Single-Sigmoid on a track-test shaped route
===========================================

Slow from 20 m/s to a 10 m/s queue and back, following the single logistic
profile. The reference is what the vehicle is asked to follow; the trace
shows how closely it does.
"""

# %%
import numpy as np

from dsh_sim.engine import run_scenario
from dsh_sim.plotting import save_trace_svg
from dsh_sim.profiles import advisory_speed, single_sigmoid_centers
from dsh_sim.scenario import Mode, vil_track

cfg = vil_track()
trace, metrics = run_scenario(cfg)
print(metrics)

# %%
# The advisory passes through 15 m/s at the middle of the approach.
c_dec, c_acc = single_sigmoid_centers(trace.session, trace.advisory)
mid = advisory_speed(Mode.SINGLE_SIGMOID, trace.session, trace.advisory, cfg.dsh, c_dec)
print(f"latched at {trace.session.d_entry:.1f} m, approach midpoint {c_dec:.1f} m, "
      f"advisory there {mid:.6f} m/s")

# %%
# Worst tracking error once the advisory is in force.
i = trace.latch_index
print(f"max |v_ref - speed| after latch: {np.abs(trace.v_ref[i:] - trace.speed[i:]).max():.3f} m/s")

# %%
save_trace_svg(trace, cfg.dsh.speed_limit, Mode.SINGLE_SIGMOID, "vil_single_sigmoid.svg")
