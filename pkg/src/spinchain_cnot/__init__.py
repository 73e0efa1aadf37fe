"""Decoherence of a CNOT gate on a three-spin Ising-chain NMR register.

Markovian Lindblad and quasi-non-Markovian (state-dependent rates with
oscillating coherence-transfer phases) master equations, side by side.
"""
from .config import ScenarioConfig, load_config, parse_config
from .diagnostics import (ComparisonSummary, compare_regimes, emit_plot, export_csv,
                          run_scenario, thermal_profile)
from .dissipators import DissipatorMode, apply_markovian, apply_quasi, master_rhs
from .integrator import IntegratorConfig, TrajectoryRecord, run, step
from .metrics import cnot_state_error, purity
from .model import BathParams, RateTable, SystemParams, build_h0, build_rate_table
from .pulses import Pulse, Sequence, cnot_sequence, resonance_frequency

__all__ = [
    "ComparisonSummary", "ScenarioConfig", "compare_regimes", "emit_plot", "export_csv",
    "load_config", "parse_config", "run_scenario", "thermal_profile",
    "BathParams", "DissipatorMode", "IntegratorConfig", "Pulse", "RateTable", "Sequence",
    "SystemParams", "TrajectoryRecord", "apply_markovian", "apply_quasi", "build_h0",
    "build_rate_table", "cnot_sequence", "cnot_state_error", "master_rhs", "purity",
    "resonance_frequency", "run", "step",
]
