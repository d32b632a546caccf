"""Simulated gateways and the network-server ingest with multi-gateway dedup.

A gateway forwards an uplink when the transmitter is inside its range and a
seeded Bernoulli draw does not drop it; forwarded frames are wrapped with the
gateway id and a receive timestamp. The wrapped datagram wire layout is
bit-exact: gateway_id (8 bytes BE), rx_unix_ms (8 bytes BE, signed), then the
encoded frame.

The server deduplicates on (dev_addr, fcnt): the first arrival wins and any
same-or-older fcnt for the device is reported as a duplicate, which makes one
transmission heard by N gateways yield exactly one new fix regardless of
arrival order.
"""

from __future__ import annotations

import random
import struct
import threading
from dataclasses import dataclass, field
from typing import Optional

from ..errors import CodecError, TruncatedFrameError, ValidationError
from ..geodesy import GeoPoint, ground_distance
from .codec import GpsFixPayload, UplinkFrame, decode_gps_fix, decode_uplink

DEDUP_WINDOW_MS = 2_000

_WRAP_STRUCT = struct.Struct(">Qq")


@dataclass(frozen=True)
class GatewayConfig:
    gateway_id: int
    position: GeoPoint
    range_m: float
    loss_prob: float = 0.0
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.gateway_id <= 0xFFFFFFFFFFFFFFFF:
            raise ValidationError(f"gateway_id must fit 64 bits: {self.gateway_id}")
        if self.range_m <= 0:
            raise ValidationError(f"range_m must be > 0: {self.range_m}")
        if not 0.0 <= self.loss_prob <= 1.0:
            raise ValidationError(f"loss_prob must be in [0, 1]: {self.loss_prob}")


@dataclass(frozen=True)
class WrappedFrame:
    """A frame as forwarded by one gateway."""

    gateway_id: int
    rx_unix_ms: int
    frame_bytes: bytes


def encode_wrapped(w: WrappedFrame) -> bytes:
    return _WRAP_STRUCT.pack(w.gateway_id, w.rx_unix_ms) + w.frame_bytes


def decode_wrapped(datagram: bytes) -> WrappedFrame:
    if len(datagram) < _WRAP_STRUCT.size:
        raise TruncatedFrameError(f"wrapped frame of {len(datagram)} bytes is shorter than its header")
    gateway_id, rx_unix_ms = _WRAP_STRUCT.unpack(datagram[: _WRAP_STRUCT.size])
    return WrappedFrame(gateway_id, rx_unix_ms, bytes(datagram[_WRAP_STRUCT.size:]))


class Gateway:
    """One simulated gateway with its own deterministic loss stream."""

    def __init__(self, config: GatewayConfig):
        self.config = config
        self._rng = random.Random(config.rng_seed)

    def receive(self, tx_pos: GeoPoint, frame_bytes: bytes, rx_unix_ms: int) -> Optional[WrappedFrame]:
        """Return the wrapped frame, or None when out of range / lost."""
        if ground_distance(tx_pos, self.config.position) > self.config.range_m:
            return None
        if self.config.loss_prob > 0.0 and self._rng.random() < self.config.loss_prob:
            return None
        return WrappedFrame(self.config.gateway_id, rx_unix_ms, frame_bytes)


@dataclass(frozen=True)
class NewFix:
    """First-arrival decode of a GPS uplink, as handed to the tracker."""

    dev_addr: int
    fcnt: int
    fix: GpsFixPayload
    rx_unix_ms: int  # earliest gateway receive timestamp
    gateway_id: int


@dataclass
class _DeviceState:
    last_fcnt: int = -1
    recent_keys: dict[int, int] = field(default_factory=dict)  # fcnt -> first rx ms


class NetworkServer:
    """Dedup + decode stage between gateways and the tracker.

    Ingest is serialized by an internal lock, so the stream of NewFix results
    observed by the caller is totally ordered by server arrival.
    """

    def __init__(self, dedup_window_ms: int = DEDUP_WINDOW_MS):
        self.dedup_window_ms = dedup_window_ms
        self._devices: dict[int, _DeviceState] = {}
        self._lock = threading.Lock()
        self.counters = {"forwarded": 0, "new_fix": 0, "duplicates": 0, "decode_failures": 0}

    def ingest(self, wrapped: WrappedFrame) -> Optional[NewFix]:
        """Process one gateway-forwarded frame; None means duplicate or undecodable."""
        with self._lock:
            self.counters["forwarded"] += 1
            try:
                frame = decode_uplink(wrapped.frame_bytes)
                fix = decode_gps_fix(frame.payload)
            except CodecError:
                self.counters["decode_failures"] += 1
                return None
            state = self._devices.setdefault(frame.dev_addr, _DeviceState())
            self._evict(state, wrapped.rx_unix_ms)
            if frame.fcnt <= state.last_fcnt:
                self.counters["duplicates"] += 1
                state.recent_keys.setdefault(frame.fcnt, wrapped.rx_unix_ms)
                return None
            state.last_fcnt = frame.fcnt
            state.recent_keys[frame.fcnt] = wrapped.rx_unix_ms
            self.counters["new_fix"] += 1
            return NewFix(
                dev_addr=frame.dev_addr,
                fcnt=frame.fcnt,
                fix=fix,
                rx_unix_ms=wrapped.rx_unix_ms,
                gateway_id=wrapped.gateway_id,
            )

    def ingest_datagram(self, datagram: bytes) -> Optional[NewFix]:
        try:
            wrapped = decode_wrapped(datagram)
        except CodecError:
            with self._lock:
                self.counters["forwarded"] += 1
                self.counters["decode_failures"] += 1
            return None
        return self.ingest(wrapped)

    def _evict(self, state: _DeviceState, now_ms: int) -> None:
        cutoff = now_ms - self.dedup_window_ms
        stale = [k for k, ts in state.recent_keys.items() if ts < cutoff]
        for k in stale:
            del state.recent_keys[k]

    def decode_frame(self, frame: UplinkFrame) -> GpsFixPayload:
        return decode_gps_fix(frame.payload)
