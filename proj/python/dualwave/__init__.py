"""Plasmon-scale quasiparticle fields: wavenumbers, equation of state,
field maps and trajectories.

Lengths are in plasmon lengths, energies in plasmon energies, unless a
function name says otherwise.
"""

from ._core import (
    BoundaryConstants,
    ConservationReport,
    DomainError,
    NumericalError,
    Orbital,
    PhysicalScales,
    SingularityError,
    Trajectory,
    classify_trajectory,
    conservation_check,
    density_of_mu,
    derive_scales,
    eval_1d,
    eval_dipole,
    eval_dispersion,
    evaluate_grid,
    fermi_energy,
    fringe_spectrum,
    integrate_field_trajectory,
    make_orbital,
    mu_of_density,
    pressure_of_mu,
    trace_bohmian_paths,
)

__all__ = [
    "BoundaryConstants",
    "ConservationReport",
    "DomainError",
    "NumericalError",
    "Orbital",
    "PhysicalScales",
    "SingularityError",
    "Trajectory",
    "classify_trajectory",
    "conservation_check",
    "density_of_mu",
    "derive_scales",
    "eval_1d",
    "eval_dipole",
    "eval_dispersion",
    "evaluate_grid",
    "fermi_energy",
    "fringe_spectrum",
    "integrate_field_trajectory",
    "make_orbital",
    "mu_of_density",
    "pressure_of_mu",
    "trace_bohmian_paths",
]
