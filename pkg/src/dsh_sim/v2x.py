"""Queue-advisory wire format and the range-gated RSU link.

Frame layout, 36 bytes, little-endian, no padding:

====== ====== ===============================
offset size   field
====== ====== ===============================
0      4      msg_id (uint32)
4      8      timestamp_ms (uint64)
12     8      queue_start_m (float64)
20     8      queue_end_m (float64)
28     4      queue_speed_mps (float32)
32     4      comm_range_m (float32)
====== ====== ===============================

Replay logs store frames back to back, each preceded by its length as a
little-endian uint32.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, Iterator

from .scenario import QueueAdvisory, ValidationError, VehicleState

FRAME = struct.Struct("<IQddff")
FRAME_SIZE = FRAME.size
assert FRAME_SIZE == 36

_LENGTH_PREFIX = struct.Struct("<I")


class LengthError(ValueError):
    """Frame is not exactly FRAME_SIZE bytes."""


def _as_float32(name: str, value: float) -> float:
    try:
        return struct.unpack("<f", struct.pack("<f", value))[0]
    except (OverflowError, struct.error):
        raise ValidationError(name, f"{value!r} does not fit a float32") from None


@dataclass(frozen=True)
class QueueAdvisoryMessage:
    """One RSU broadcast. float32 fields are rounded to float32 on construction."""

    msg_id: int
    timestamp_ms: int
    queue_start_m: float
    queue_end_m: float
    queue_speed_mps: float
    comm_range_m: float

    def __post_init__(self):
        if not (isinstance(self.msg_id, int) and 0 <= self.msg_id < 2**32):
            raise ValidationError("msg_id", "must be a uint32")
        if not (isinstance(self.timestamp_ms, int) and 0 <= self.timestamp_ms < 2**64):
            raise ValidationError("timestamp_ms", "must be a uint64")
        object.__setattr__(self, "queue_speed_mps",
                           _as_float32("queue_speed_mps", self.queue_speed_mps))
        object.__setattr__(self, "comm_range_m", _as_float32("comm_range_m", self.comm_range_m))
        self.advisory()

    def advisory(self) -> QueueAdvisory:
        return QueueAdvisory(queue_start=self.queue_start_m, queue_end=self.queue_end_m,
                             queue_speed=self.queue_speed_mps, comm_range=self.comm_range_m)

    @classmethod
    def from_advisory(cls, advisory: QueueAdvisory, msg_id: int = 0,
                      timestamp_ms: int = 0) -> "QueueAdvisoryMessage":
        return cls(msg_id, timestamp_ms, advisory.queue_start, advisory.queue_end,
                   advisory.queue_speed, advisory.comm_range)


def encode(msg: QueueAdvisoryMessage) -> bytes:
    return FRAME.pack(msg.msg_id, msg.timestamp_ms, msg.queue_start_m, msg.queue_end_m,
                      msg.queue_speed_mps, msg.comm_range_m)


def decode(frame: bytes) -> QueueAdvisoryMessage:
    """Parse a frame. Raises LengthError or ValidationError."""
    if len(frame) != FRAME_SIZE:
        raise LengthError(f"expected {FRAME_SIZE} bytes, got {len(frame)}")
    return QueueAdvisoryMessage(*FRAME.unpack(frame))


def rsu_deliver(state: VehicleState, msg: QueueAdvisoryMessage) -> QueueAdvisoryMessage | None:
    """Return ``msg`` if the vehicle is within broadcast range of the queue, else None.

    Ideal link: no loss, no latency.
    """
    if msg.queue_start_m - state.distance < msg.comm_range_m:
        return msg
    return None


def append_replay(stream: BinaryIO, frame: bytes) -> None:
    stream.write(_LENGTH_PREFIX.pack(len(frame)))
    stream.write(frame)


def iter_replay(stream: BinaryIO) -> Iterator[bytes]:
    """Yield raw frames from a replay log; a truncated tail raises LengthError."""
    while True:
        head = stream.read(_LENGTH_PREFIX.size)
        if not head:
            return
        if len(head) < _LENGTH_PREFIX.size:
            raise LengthError("truncated length prefix")
        (size,) = _LENGTH_PREFIX.unpack(head)
        body = stream.read(size)
        if len(body) != size:
            raise LengthError(f"record truncated: {len(body)} of {size} bytes")
        yield body


def read_replay(path: str | Path) -> list[QueueAdvisoryMessage]:
    with open(path, "rb") as fh:
        return [decode(frame) for frame in iter_replay(fh)]
