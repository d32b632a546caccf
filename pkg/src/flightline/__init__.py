"""Flightline asset tracking: LoRaWAN-style GPS ingest, fiducial tag geometry,
fused trajectories, persistence with replay, and a live map service."""

__version__ = "0.1.0"
