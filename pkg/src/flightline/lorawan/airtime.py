"""Chirp-spread-spectrum airtime model and the 1% duty-cycle gate.

Standard LoRa time-on-air:

    T_sym      = 2^SF / BW
    T_preamble = (n_preamble + 4.25) * T_sym
    n_payload  = 8 + max(ceil((8 PL - 4 SF + 28 + 16 CRC - 20 IH)
                              / (4 (SF - 2 DE))) * (CR + 4), 0)
    airtime    = T_preamble + n_payload * T_sym

with IH = 1 for implicit header, DE = 1 when T_sym exceeds 16 ms
(low-data-rate optimization, SF11/SF12 at 125 kHz).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import ValidationError

VALID_BANDWIDTHS_HZ = (125_000, 250_000, 500_000)

DUTY_CYCLE_WINDOW_MS = 3_600_000
DUTY_CYCLE_BUDGET_MS = 36_000.0  # 1% of the trailing hour


@dataclass(frozen=True)
class RadioParams:
    """LoRa PHY parameters of one link."""

    spreading_factor: int = 7
    bandwidth_hz: int = 125_000
    coding_rate_index: int = 1  # 1..4 for 4/5..4/8
    preamble_symbols: int = 8
    explicit_header: bool = True
    crc_on: bool = True

    def __post_init__(self) -> None:
        if not 7 <= self.spreading_factor <= 12:
            raise ValidationError(f"spreading_factor must be 7..12: {self.spreading_factor}")
        if self.bandwidth_hz not in VALID_BANDWIDTHS_HZ:
            raise ValidationError(f"bandwidth_hz must be one of {VALID_BANDWIDTHS_HZ}: {self.bandwidth_hz}")
        if not 1 <= self.coding_rate_index <= 4:
            raise ValidationError(f"coding_rate_index must be 1..4: {self.coding_rate_index}")
        if self.preamble_symbols < 1:
            raise ValidationError(f"preamble_symbols must be >= 1: {self.preamble_symbols}")

    @property
    def symbol_time_ms(self) -> float:
        return (1 << self.spreading_factor) / self.bandwidth_hz * 1000.0


def airtime_ms(params: RadioParams, payload_len_bytes: int) -> float:
    """Time on air in milliseconds for a physical payload of the given length."""
    if not 0 <= payload_len_bytes <= 255:
        raise ValidationError(f"payload_len_bytes must be 0..255: {payload_len_bytes}")
    sf = params.spreading_factor
    t_sym = params.symbol_time_ms
    de = 1 if t_sym > 16.0 else 0
    crc = 1 if params.crc_on else 0
    ih = 0 if params.explicit_header else 1
    t_preamble = (params.preamble_symbols + 4.25) * t_sym
    numerator = 8 * payload_len_bytes - 4 * sf + 28 + 16 * crc - 20 * ih
    n_payload = 8 + max(
        math.ceil(numerator / (4 * (sf - 2 * de))) * (params.coding_rate_index + 4), 0
    )
    return t_preamble + n_payload * t_sym


@dataclass
class DutyCycleGate:
    """Tracks one device's on-air time over a trailing 1-hour window.

    A transmission is allowed when the window spend plus the new airtime stays
    within the 1% budget; otherwise the gate reports the earliest timestamp at
    which enough past spend will have expired.
    """

    window_ms: int = DUTY_CYCLE_WINDOW_MS
    budget_ms: float = DUTY_CYCLE_BUDGET_MS
    _spends: list[tuple[int, float]] = field(default_factory=list)

    def _expire(self, now_ms: int) -> None:
        cutoff = now_ms - self.window_ms
        while self._spends and self._spends[0][0] <= cutoff:
            self._spends.pop(0)

    def spent_ms(self, now_ms: int) -> float:
        self._expire(now_ms)
        return sum(ms for _, ms in self._spends)

    def check(self, airtime_ms: float, now_ms: int) -> tuple[bool, int]:
        """Return (allowed, next_allowed_ms); next_allowed_ms == now_ms when allowed."""
        if airtime_ms < 0:
            raise ValidationError(f"airtime_ms must be >= 0: {airtime_ms}")
        self._expire(now_ms)
        spent = sum(ms for _, ms in self._spends)
        if spent + airtime_ms <= self.budget_ms:
            return True, now_ms
        # walk expirations oldest-first until the remaining spend fits
        remaining = spent
        next_allowed = now_ms
        for ts, ms in self._spends:
            remaining -= ms
            next_allowed = ts + self.window_ms
            if remaining + airtime_ms <= self.budget_ms:
                break
        return False, next_allowed

    def record(self, airtime_ms: float, now_ms: int) -> None:
        """Account a transmission that was actually sent at now_ms."""
        self._spends.append((now_ms, airtime_ms))
