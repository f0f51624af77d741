"""Batch front end: YAML scenarios in, CSV time series and JSON reports out."""

from .config import ScenarioConfig, load_config, validate_config
from .fitting import DecayFit, fit_decay
from .scenarios import run_scenario, sweep_table

__all__ = ["DecayFit", "ScenarioConfig", "fit_decay", "load_config", "run_scenario", "sweep_table", "validate_config"]
