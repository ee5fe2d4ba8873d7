"""
Advisory speed profiles along the road
======================================

A vehicle cruising at 20 m/s enters broadcast range of a queue 1000 m ahead.
We latch a session at that point and evaluate the three advisory profiles
as functions of distance travelled.
"""

# %%
# Latch the session. With 1 m/s drops per segment and a 15 m/s speed
# difference the approach splits into 15 segments of floor(1000 / 15) = 66 m.
import numpy as np
from matplotlib.figure import Figure

from dsh_sim import DshSession, Mode, advisory_speed, canonical_mil

cfg = canonical_mil()
session = DshSession.from_entry(20.0, 4200.0, cfg.advisory, cfg.dsh)
print(session)

# %%
# Evaluate every profile on a 0.5 m grid. The generators accept arrays.
d = np.arange(4200.0, 8000.0, 0.5)
profiles = {mode: advisory_speed(mode, session, cfg.advisory, cfg.dsh, d)
            for mode in (Mode.STEP, Mode.STEP_SIGMOID, Mode.SINGLE_SIGMOID)}

for mode, v in profiles.items():
    at_queue = v[d == 5200.0][0]
    print(f"{mode.value:15s} v(4200)={v[0]:6.3f}  v(5200)={at_queue:5.2f}  v(8000-)={v[-1]:6.3f}")

# %%
# Plot them against distance, with the queue shaded.
fig = Figure(figsize=(8, 4))
ax = fig.add_subplot()
for mode, v in profiles.items():
    ax.plot(d, v, label=mode.value)
ax.axvspan(cfg.advisory.queue_start, cfg.advisory.queue_end, color="0.9", label="queue")
ax.set_xlabel("distance travelled [m]")
ax.set_ylabel("advisory speed [m/s]")
ax.legend()
fig.savefig("advisory_profiles.svg")
