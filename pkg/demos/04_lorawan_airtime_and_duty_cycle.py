#!/usr/bin/env python3
"""What a GPS fix costs on the air, and what the 1% duty cycle permits.

A fix payload is 11 bytes; framed with header and CRC it is a 23-byte
transmission. Spreading factor trades range for airtime exponentially, and
the unlicensed-band duty cycle (1% of any trailing hour) turns that airtime
into a hard cap on the report rate.
"""

from flightline.lorawan.airtime import DutyCycleGate, RadioParams, airtime_ms
from flightline.lorawan.codec import GpsFixPayload, UplinkFrame, encode_gps_fix, encode_uplink

fix = GpsFixPayload.from_geo(39.0458, -74.35, 3.2, battery_pct=91)
frame_bytes = encode_uplink(UplinkFrame(0x16, 1, 1, encode_gps_fix(fix)))
print(f"GPS uplink frame: {len(frame_bytes)} bytes ({frame_bytes[:10].hex()}...)\n")

print(f"{'SF':>4} | {'airtime':>10} | {'min interval @1% duty':>22} | {'max fixes/hour':>14}")
print("-" * 62)
for sf in range(7, 13):
    params = RadioParams(spreading_factor=sf, bandwidth_hz=125_000, coding_rate_index=1)
    toa = airtime_ms(params, len(frame_bytes))
    min_interval_s = toa / 1000.0 / 0.01
    print(f"{sf:>4} | {toa:>8.1f} ms | {min_interval_s:>20.1f} s | {3600 / min_interval_s:>14.0f}")

print()
print("A 22-tracker fleet at one fix per 10 s on SF7:")
params = RadioParams(spreading_factor=7, bandwidth_hz=125_000, coding_rate_index=1)
toa = airtime_ms(params, len(frame_bytes))
per_device_hour_ms = toa * 360
print(f"  per-device airtime: {toa:.1f} ms/fix -> {per_device_hour_ms/1000:.1f} s/hour "
      f"({per_device_hour_ms / 3_600_000 * 100:.2f}% duty) -- comfortably legal")

print()
print("Pushing one device to a 2 s interval on SF12:")
gate = DutyCycleGate()
params12 = RadioParams(spreading_factor=12, bandwidth_hz=125_000, coding_rate_index=1)
toa12 = airtime_ms(params12, len(frame_bytes))
t_ms = 0
sent = deferred = 0
while t_ms < 3_600_000:
    allowed, next_allowed = gate.check(toa12, t_ms)
    if allowed:
        gate.record(toa12, t_ms)
        sent += 1
        t_ms += 2_000
    else:
        deferred += 1
        t_ms = next_allowed
print(f"  airtime {toa12:.0f} ms/fix: {sent} fixes sent in the first hour, "
      f"{deferred} deferrals -- the duty cycle, not the schedule, sets the rate")
