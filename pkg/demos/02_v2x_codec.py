"""
The queue advisory on the wire
==============================

The roadside unit packs the queue position and speed into a fixed 36-byte
little-endian frame. The vehicle only hears it inside broadcast range.
"""

# %%
from dsh_sim.scenario import VehicleState, canonical_mil
from dsh_sim.v2x import QueueAdvisoryMessage, decode, encode, rsu_deliver

msg = QueueAdvisoryMessage.from_advisory(canonical_mil().advisory, msg_id=1)
frame = encode(msg)
print(len(frame), frame.hex())

# %%
# Decoding gives back the same message; invalid frames raise.
assert decode(frame) == msg
try:
    decode(frame[:-1])
except ValueError as exc:
    print(type(exc).__name__, exc)

# %%
# Delivery is strict: exactly at 1000 m from the queue the frame is not heard yet.
for distance in (4199.0, 4200.0, 4200.01, 6000.0):
    heard = rsu_deliver(VehicleState(distance, 20.0), msg) is not None
    print(f"{distance:8.2f} m  delivered={heard}")
