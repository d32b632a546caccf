from .config import ServiceConfig, load_camera_rigs, load_config
from .scenario import Scenario, load_scenario, parse_scenario
from .sim import SimulationSummary, simulate
from .app import Service

__all__ = [
    "ServiceConfig",
    "load_camera_rigs",
    "load_config",
    "Scenario",
    "load_scenario",
    "parse_scenario",
    "SimulationSummary",
    "simulate",
    "Service",
]
