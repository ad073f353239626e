"""Screened Kratzer-Hellmann potential model toolkit.

Closed-form bound-state spectra and wavefunctions, rotation-vibrational
partition function with derived thermodynamics, and Shannon/Fisher
information measures, with a CLI for table regression and figure emission.
"""

from .model import (
    NoBoundState,
    PotentialParams,
    QuantumNumbers,
    UnitSystem,
    UNIT_PRESETS,
    bound_state_check,
    energy,
    energy_hellmann,
    energy_screened_kratzer,
    potential_value,
    spectroscopic_to_qn,
)
from .quadrature import NonConvergence, QuadraturePolicy
from .wavefunction import BoundState, UnsupportedL, build_bound_state
from .thermo import ThermoInputs, ThermoSeries, thermo_series
from .info import InfoRecord, info_record, info_sweep

__version__ = "0.1.0"

__all__ = [
    "BoundState",
    "InfoRecord",
    "NoBoundState",
    "NonConvergence",
    "PotentialParams",
    "QuadraturePolicy",
    "QuantumNumbers",
    "ThermoInputs",
    "ThermoSeries",
    "UNIT_PRESETS",
    "UnitSystem",
    "UnsupportedL",
    "bound_state_check",
    "build_bound_state",
    "energy",
    "energy_hellmann",
    "energy_screened_kratzer",
    "info_record",
    "info_sweep",
    "potential_value",
    "spectroscopic_to_qn",
    "thermo_series",
    "__version__",
]
