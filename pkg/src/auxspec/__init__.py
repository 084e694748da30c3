"""Auxiliary-field approximations to radial bound-state energies.

Closed forms for power-law and logarithmic potentials, a generic
auxiliary-field solver, a finite-difference eigenvalue oracle, error
bounds, and fitting tools for the improved energy formula.
"""
from .aft_core import (
    AuxFieldSolution,
    GenericPotential,
    SolvableBase,
    effective_potential,
    energy_with_field,
    field_slope,
    k_function,
    k_inverse,
    minimize_field,
)
from .closed_form import (
    CoeffFamily,
    ExtrapolationWarning,
    aft_energy,
    aft_rho0,
    airy_epsilon,
    ec_energy,
    eh_energy,
    epsilon_app,
    improved_epsilon,
    improved_log_epsilon,
    log_energy,
    log_rho0,
    power_limit_to_log,
    rho0_coulomb,
    rho0_harmonic,
    wkb_epsilon,
)
from .error_bounds import ErrorReport, error_report, gap_identity, ground_state_bound, mean_field_check
from .errors import (
    AuxspecError,
    BracketError,
    ConvergenceError,
    DomainError,
    MonotonicityError,
    NoBoundStateError,
    PoleError,
    RankError,
    ScalingConstraintError,
)
from .fitkit import FitResult, RationalFit, chi_family, chi_measure, chi_wkb, fit_bc, fit_grid, fit_hyperbola
from .numeric_solver import RadialProblem, ReferenceTable, SpectrumSlice, reference_table, solve_radial
from .potentials import (
    LOG,
    DimensionlessState,
    LogPotential,
    PowerLawPotential,
    QuantumNumbers,
    dimensionless_prefactor,
    log_mass_shift,
    log_physical_energy,
    scale_energy,
)

__version__ = "0.1.0"
