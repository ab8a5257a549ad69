"""Electromagnetically induced transparency in a pumped qubit coupled to an LC resonator."""

__version__ = "0.1.0"

from .hamiltonians import (  # noqa: E402
    SystemParams,
    build_h_eff,
    build_h_probe_term,
    build_h_sys_prime,
    reference_params,
    resonant_detuning,
    with_detuning_preset,
)
from .semiclassical import (  # noqa: E402
    Numerator,
    Route,
    SteadyMode,
    chi1_eff,
    chi1_eff_resonant,
    chi1_full,
    solve_population_inversion,
    spectrum,
    steady_state,
)
