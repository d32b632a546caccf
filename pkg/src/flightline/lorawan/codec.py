"""Bit-exact wire codecs for uplink frames and the GPS fix payload.

Uplink frame layout (big-endian throughout):

    offset  size  field
    0       1     magic 0x4C
    1       1     version 0x01
    2       4     dev_addr
    6       2     fcnt
    8       1     port
    9       1     payload_len (<= 51)
    10      n     payload
    10+n    2     CRC-16/CCITT-FALSE over bytes [0, 10+n)

GPS fix payload (exactly 11 bytes): lat_e7 (int32), lon_e7 (int32),
alt_dm (int16), battery_pct (uint8).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from ..errors import (
    BadMagicError,
    BadVersionError,
    CrcMismatchError,
    EncodeError,
    TruncatedFrameError,
)

FRAME_MAGIC = 0x4C
FRAME_VERSION = 0x01
MAX_PAYLOAD_LEN = 51  # LoRa DR0 practical limit
HEADER_LEN = 10
CRC_LEN = 2

_GPS_STRUCT = struct.Struct(">iihB")


def _crc16_table() -> list[int]:
    table = []
    for byte in range(256):
        crc = byte << 8
        for _ in range(8):
            crc = ((crc << 1) ^ 0x1021) if crc & 0x8000 else (crc << 1)
            crc &= 0xFFFF
        table.append(crc)
    return table


_CRC_TABLE = _crc16_table()


def crc16_ccitt(data: bytes) -> int:
    """CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection, no xorout."""
    crc = 0xFFFF
    for b in data:
        crc = ((crc << 8) & 0xFFFF) ^ _CRC_TABLE[(crc >> 8) ^ b]
    return crc


@dataclass(frozen=True)
class UplinkFrame:
    """One device-to-server transfer unit."""

    dev_addr: int
    fcnt: int
    port: int
    payload: bytes

    def __post_init__(self) -> None:
        if not 0 <= self.dev_addr <= 0xFFFFFFFF:
            raise EncodeError(f"dev_addr must fit 32 bits: {self.dev_addr:#x}")
        if not 0 <= self.fcnt <= 0xFFFF:
            raise EncodeError(f"fcnt must fit 16 bits: {self.fcnt}")
        if not 0 <= self.port <= 0xFF:
            raise EncodeError(f"port must fit 8 bits: {self.port}")
        if len(self.payload) > MAX_PAYLOAD_LEN:
            raise EncodeError(f"payload length {len(self.payload)} exceeds {MAX_PAYLOAD_LEN}")


@dataclass(frozen=True)
class GpsFixPayload:
    """Tracker-reported fix, quantized for the 11-byte wire layout."""

    lat_e7: int
    lon_e7: int
    alt_dm: int
    battery_pct: int

    def __post_init__(self) -> None:
        if not -900_000_000 <= self.lat_e7 <= 900_000_000:
            raise EncodeError(f"lat_e7 out of range: {self.lat_e7}")
        if not -1_800_000_000 <= self.lon_e7 <= 1_800_000_000:
            raise EncodeError(f"lon_e7 out of range: {self.lon_e7}")
        if not -32768 <= self.alt_dm <= 32767:
            raise EncodeError(f"alt_dm out of int16 range: {self.alt_dm}")
        if not 0 <= self.battery_pct <= 100:
            raise EncodeError(f"battery_pct out of range [0, 100]: {self.battery_pct}")

    @classmethod
    def from_geo(cls, lat_deg: float, lon_deg: float, alt_m: float, battery_pct: int) -> "GpsFixPayload":
        return cls(
            lat_e7=round(lat_deg * 1e7),
            lon_e7=round(lon_deg * 1e7),
            alt_dm=round(alt_m * 10),
            battery_pct=battery_pct,
        )

    @property
    def lat_deg(self) -> float:
        return self.lat_e7 / 1e7

    @property
    def lon_deg(self) -> float:
        return self.lon_e7 / 1e7

    @property
    def alt_m(self) -> float:
        return self.alt_dm / 10.0


def encode_gps_fix(fix: GpsFixPayload) -> bytes:
    return _GPS_STRUCT.pack(fix.lat_e7, fix.lon_e7, fix.alt_dm, fix.battery_pct)


def decode_gps_fix(data: bytes) -> GpsFixPayload:
    if len(data) != _GPS_STRUCT.size:
        raise TruncatedFrameError(f"GPS fix payload must be {_GPS_STRUCT.size} bytes, got {len(data)}")
    lat_e7, lon_e7, alt_dm, battery = _GPS_STRUCT.unpack(data)
    return GpsFixPayload(lat_e7, lon_e7, alt_dm, battery)


def encode_uplink(frame: UplinkFrame) -> bytes:
    body = struct.pack(
        ">BBIHBB",
        FRAME_MAGIC,
        FRAME_VERSION,
        frame.dev_addr,
        frame.fcnt,
        frame.port,
        len(frame.payload),
    ) + frame.payload
    return body + struct.pack(">H", crc16_ccitt(body))


def decode_uplink(data: bytes) -> UplinkFrame:
    """Decode and verify a frame; magic, version, length and CRC each fail distinctly."""
    if len(data) < HEADER_LEN + CRC_LEN:
        raise TruncatedFrameError(f"frame of {len(data)} bytes is shorter than header+CRC")
    if data[0] != FRAME_MAGIC:
        raise BadMagicError(f"bad magic {data[0]:#04x}")
    if data[1] != FRAME_VERSION:
        raise BadVersionError(f"unsupported version {data[1]}")
    _, _, dev_addr, fcnt, port, payload_len = struct.unpack(">BBIHBB", data[:HEADER_LEN])
    if payload_len > MAX_PAYLOAD_LEN:
        raise TruncatedFrameError(f"payload_len {payload_len} exceeds {MAX_PAYLOAD_LEN}")
    total = HEADER_LEN + payload_len + CRC_LEN
    if len(data) != total:
        raise TruncatedFrameError(f"expected {total} bytes for payload_len={payload_len}, got {len(data)}")
    body, crc_bytes = data[:-CRC_LEN], data[-CRC_LEN:]
    expected = crc16_ccitt(body)
    (got,) = struct.unpack(">H", crc_bytes)
    if got != expected:
        raise CrcMismatchError(f"CRC mismatch: frame carries {got:#06x}, computed {expected:#06x}")
    return UplinkFrame(dev_addr, fcnt, port, bytes(data[HEADER_LEN:HEADER_LEN + payload_len]))
