"""Fixed-energy scattering phase shifts of layered radial potentials.

Core pieces: a transfer-matrix forward solver (`solver`), a slow ODE
reference path (`ode`), the normalized shift misfit (`objective`),
derivative-free local minimization with layer reduction (`localopt`), and a
seeded multistart search for distinct potentials with matching shifts
(`search`). A FastAPI service (`phasefit.service`) wraps the package; the CLI
(`phasefit.cli`) is a thin client of that service.
"""

from .errors import (
    BesselOverflowError,
    ConfigError,
    DomainError,
    EmptySampleError,
    EvanescentLayerError,
    PhasefitError,
    SolverError,
)
from .localopt import AdmissibleSet, Configuration, LocalOptParams, configuration_potential
from .objective import ShiftTarget, phi, phi_of_shifts, target_from_potential
from .ode import OdeSettings, phase_shift_ode, phase_shift_table_ode
from .search import LocalMinimum, SearchOutcome, SearchParams, random_batch, reduced_random_search
from .solver import (
    PhaseShiftTable,
    Potential,
    compute_wavenumbers,
    phase_shift,
    phase_shift_table,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibleSet",
    "BesselOverflowError",
    "ConfigError",
    "Configuration",
    "DomainError",
    "EmptySampleError",
    "EvanescentLayerError",
    "LocalMinimum",
    "LocalOptParams",
    "OdeSettings",
    "PhaseShiftTable",
    "PhasefitError",
    "Potential",
    "SearchOutcome",
    "SearchParams",
    "ShiftTarget",
    "SolverError",
    "compute_wavenumbers",
    "configuration_potential",
    "phase_shift",
    "phase_shift_ode",
    "phase_shift_table",
    "phase_shift_table_ode",
    "phi",
    "phi_of_shifts",
    "random_batch",
    "reduced_random_search",
    "target_from_potential",
    "__version__",
]
