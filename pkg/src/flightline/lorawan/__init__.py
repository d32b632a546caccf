from .codec import (
    GpsFixPayload,
    UplinkFrame,
    crc16_ccitt,
    decode_gps_fix,
    decode_uplink,
    encode_gps_fix,
    encode_uplink,
)
from .airtime import DutyCycleGate, RadioParams, airtime_ms
from .network import (
    Gateway,
    GatewayConfig,
    NetworkServer,
    NewFix,
    WrappedFrame,
    decode_wrapped,
    encode_wrapped,
)

__all__ = [
    "GpsFixPayload",
    "UplinkFrame",
    "crc16_ccitt",
    "decode_gps_fix",
    "decode_uplink",
    "encode_gps_fix",
    "encode_uplink",
    "DutyCycleGate",
    "RadioParams",
    "airtime_ms",
    "Gateway",
    "GatewayConfig",
    "NetworkServer",
    "NewFix",
    "WrappedFrame",
    "decode_wrapped",
    "encode_wrapped",
]
