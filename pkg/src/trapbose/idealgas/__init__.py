"""Ideal Bose gas in the isotropic harmonic trap."""

from .appendix import verify_appendix_a
from .canonical import (
    CanonicalState,
    canonical_moments,
    canonical_partition,
    enumerate_configurations,
    factorial_second_moment,
    log_partition,
    occupation_distribution,
    pair_moment,
    pair_moment_distinct,
)
from .density import (
    DensityProfile,
    hermite_axis_density,
    hermite_functions,
    sup_scaled_thermal_density,
    thermal_count,
    thermal_density,
    thermal_density_values,
    thermal_momentum_values,
)
from .grand import (
    GrandCanonicalState,
    eta_above_tc,
    gc_free_energy,
    grand_canonical,
    solve_mu,
    solve_mu0,
)
from .spectrum import OscillatorSpectrum, adaptive_n_max, critical_temperature, degeneracy

__all__ = [
    "CanonicalState",
    "DensityProfile",
    "GrandCanonicalState",
    "OscillatorSpectrum",
    "adaptive_n_max",
    "canonical_moments",
    "canonical_partition",
    "critical_temperature",
    "degeneracy",
    "enumerate_configurations",
    "eta_above_tc",
    "factorial_second_moment",
    "gc_free_energy",
    "grand_canonical",
    "hermite_axis_density",
    "hermite_functions",
    "log_partition",
    "occupation_distribution",
    "pair_moment",
    "pair_moment_distinct",
    "solve_mu",
    "solve_mu0",
    "sup_scaled_thermal_density",
    "thermal_count",
    "thermal_density",
    "thermal_density_values",
    "thermal_momentum_values",
    "verify_appendix_a",
]
