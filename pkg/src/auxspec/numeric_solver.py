"""Numerical eigenvalues of the dimensionless radial Hamiltonians.

Solves ``-(1/4) u'' + [l(l+1)/(4 r^2) + V(r)] u = eps u`` with
``V = sgn(lam) r^lam`` or ``V = ln r``.

With ``r = e^t`` and ``u = e^(t/2) w`` the equation becomes

    -w'' + [(l + 1/2)^2 + 4 r^2 V(r)] w = 4 eps r^2 w,

whose solutions are smooth in t even where u is not smooth in r (the
``r^(lam+2)`` terms near the origin, the log singularity).  A three-point
difference on a uniform t mesh therefore has a clean even-power error
expansion, and three nested meshes (h, h/2, h/4) are combined by Richardson
extrapolation.  The pencil is reduced to a symmetric tridiagonal matrix;
its entries span many orders of magnitude, so eigenvalues are taken by
Sturm bisection to full relative accuracy rather than with the default
absolute tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from . import closed_form
from .errors import AuxspecError, ConvergenceError, DomainError, NoBoundStateError
from .potentials import (
    LOG,
    Exponent,
    LogPotential,
    PowerLawPotential,
    QuantumNumbers,
    dimensionless_prefactor,
    log_physical_energy,
)

DEFAULT_MESH_SIZE = 2048
DEFAULT_TOLERANCE = 5e-6
MIN_MESH_SIZE = 64
MAX_REFINEMENTS = 3
TAIL_TOLERANCE = 1e-12
INNER_CUTOFF = 1e-11  # r_min relative to the smallest state's average point


@dataclass(frozen=True)
class RadialProblem:
    """Dimensionless radial problem for one orbital quantum number.

    ``domain_cutoff`` is R_max; ``None`` sizes it from the auxiliary-field
    estimate of the highest requested state.  ``mesh_size`` is the number of
    interior points of the coarsest of the three meshes.
    """

    potential: Exponent
    ell: int
    domain_cutoff: Optional[float] = None
    mesh_size: int = DEFAULT_MESH_SIZE

    def __post_init__(self):
        if self.potential != LOG:
            lam = float(self.potential)
            if lam <= -2:
                raise NoBoundStateError(f"no bound states for lam = {lam} <= -2")
            if lam == 0:
                raise DomainError("lam = 0 is the logarithmic potential; pass LOG")
            object.__setattr__(self, "potential", lam)
        if self.ell < 0 or int(self.ell) != self.ell:
            raise DomainError(f"ell must be a nonnegative integer, got {self.ell}")
        if self.mesh_size < MIN_MESH_SIZE:
            raise DomainError(f"mesh_size must be at least {MIN_MESH_SIZE}, got {self.mesh_size}")
        if self.domain_cutoff is not None and not self.domain_cutoff > 0:
            raise DomainError(f"domain_cutoff must be positive, got {self.domain_cutoff}")

    @property
    def is_log(self):
        return self.potential == LOG

    def v(self, r):
        if self.is_log:
            return np.log(r)
        lam = self.potential
        return np.sign(lam) * r**lam

    def r_dv(self, r):
        """r V'(r), the virial weight."""
        if self.is_log:
            return np.ones_like(r)
        lam = self.potential
        return abs(lam) * r**lam


@dataclass
class SpectrumSlice:
    ell: int
    eigenvalues: np.ndarray
    convergence_estimate: np.ndarray
    domain: tuple = (0.0, 0.0)
    mesh_size: int = 0

    def __post_init__(self):
        self.eigenvalues = np.asarray(self.eigenvalues, dtype=float)
        self.convergence_estimate = np.asarray(self.convergence_estimate, dtype=float)


def _average_point(problem: RadialProblem, qn: QuantumNumbers) -> float:
    """Auxiliary-field estimate r0 of the state's size in dimensionless units."""
    if problem.is_log:
        # harmonic base: r0 = sqrt(a / (2 rho0)), rho0 = m a^2 / (2 N^2) with m=2, a=1
        return qn.harmonic_n / math.sqrt(2.0)
    lam = problem.potential
    pot = PowerLawPotential(m=2.0, a=1.0, lam=lam)
    if lam == 2:
        return math.sqrt(qn.harmonic_n / 2.0)
    if lam > 0:
        rho0 = closed_form.rho0_harmonic(pot, qn)
        return (2.0 * rho0 / abs(lam)) ** (1.0 / (lam - 2.0))
    if lam == -1:
        return qn.coulomb_n**2 / 2.0
    rho0 = closed_form.rho0_coulomb(pot, qn)
    return (rho0 / abs(lam)) ** (1.0 / (lam + 1.0))


def _mesh(problem, r_max, mesh_size):
    r_in = INNER_CUTOFF * _average_point(problem, QuantumNumbers(0, problem.ell))
    t_lo, t_hi = math.log(r_in), math.log(r_max)
    h = (t_hi - t_lo) / (mesh_size + 1)
    t = t_lo + h * np.arange(1, mesh_size + 1)
    return t, h


def _eigen(problem, t, h, n_max, vectors=False):
    r = np.exp(t)
    q = (problem.ell + 0.5) ** 2 + 4.0 * r * r * problem.v(r)
    diag = (2.0 / h**2 + q) / (r * r)
    off = -1.0 / (h**2 * r[:-1] * r[1:])
    out = eigh_tridiagonal(
        diag,
        off,
        eigvals_only=not vectors,
        select="i",
        select_range=(0, n_max),
        lapack_driver="stebz",
        tol=np.finfo(float).tiny,
    )
    if vectors:
        w, y = out
        return w / 4.0, y
    return out / 4.0


def _tail_weight(y, t, r_max):
    """Probability carried by the outer 10% of the log-mesh span."""
    p = y * y
    p /= p.sum(axis=0)
    outer = t > t[-1] - 0.1 * (t[-1] - t[0])
    r = np.exp(t)
    outer &= r > 0.5 * r_max
    return p[outer].sum(axis=0)


def _default_cutoff(problem, n_max):
    r0 = max(_average_point(problem, QuantumNumbers(n, problem.ell)) for n in (0, n_max))
    return 15.0 * r0


def _richardson(levels):
    e1, e2, e3 = levels
    r1 = (4.0 * e2 - e1) / 3.0
    r2 = (4.0 * e3 - e2) / 3.0
    return (16.0 * r2 - r1) / 15.0, np.abs(r2 - r1)


def solve_radial(problem: RadialProblem, n_max: int, tolerance: float = DEFAULT_TOLERANCE) -> SpectrumSlice:
    """Lowest ``n_max + 1`` eigenvalues for orbital number ``problem.ell``.

    The domain grows until the outer tail probability of every requested
    state is below 1e-12.  The mesh is doubled (at most three times) until
    the change of the Richardson estimate under step halving is within
    ``tolerance``; failing that a :class:`ConvergenceError` carries the best
    values and their uncertainty.
    """
    if n_max < 0:
        raise DomainError(f"n_max must be nonnegative, got {n_max}")
    r_max = problem.domain_cutoff or _default_cutoff(problem, n_max)
    mesh_size = problem.mesh_size
    if n_max >= mesh_size // 4:
        raise DomainError(f"n_max={n_max} is not resolvable on {mesh_size} mesh points")

    for _ in range(8):
        t, h = _mesh(problem, r_max, mesh_size)
        _, y = _eigen(problem, t, h, n_max, vectors=True)
        if np.all(_tail_weight(y, t, r_max) <= TAIL_TOLERANCE) or problem.domain_cutoff:
            break
        r_max *= 2.0

    best = None
    for _ in range(MAX_REFINEMENTS + 1):
        levels = []
        size = mesh_size
        for _k in range(3):
            t, h = _mesh(problem, r_max, size)
            levels.append(_eigen(problem, t, h, n_max))
            size = 2 * size + 1
        values, estimate = _richardson(levels)
        best = (values, estimate)
        if np.all(estimate <= tolerance) and np.all(np.diff(values) > 0):
            return SpectrumSlice(problem.ell, values, estimate, (float(np.exp(t[0])), r_max), mesh_size)
        mesh_size = 2 * mesh_size + 1
    raise ConvergenceError(
        f"eigenvalues for ell={problem.ell} not converged to {tolerance:g}",
        best=best[0],
        uncertainty=best[1],
    )


def eigenvector(problem: RadialProblem, n: int, r_max: Optional[float] = None, mesh_size: Optional[int] = None):
    """Eigenvalue and normalized reduced radial function on the finest mesh.

    Returns ``(eps, r, u, kinetic)`` where ``u`` is normalized so that
    ``sum(u^2 dr) = 1`` and ``kinetic`` is the expectation of the discretized
    kinetic operator (radial plus centrifugal).
    """
    r_max = r_max or problem.domain_cutoff or _default_cutoff(problem, n)
    size = mesh_size or (4 * problem.mesh_size + 3)
    t, h = _mesh(problem, r_max, size)
    eps, y = _eigen(problem, t, h, n, vectors=True)
    y = y[:, n] / np.linalg.norm(y[:, n])
    r = np.exp(t)
    # kinetic block of the scaled pencil, divided by 4
    w = y / r
    dw = np.diff(np.concatenate(([0.0], w, [0.0]))) / h
    kinetic = 0.25 * (np.sum(dw * dw) + (problem.ell + 0.5) ** 2 * np.sum(w * w))
    u = np.sqrt(r) * w
    u = u / math.sqrt(h)  # sum y^2 = 1 on a dt mesh -> integral u^2 dr = 1
    return float(eps[n]), r, u, float(kinetic), y


def virial_residual(problem: RadialProblem, n: int) -> float:
    """Relative mismatch of 2<T> and <r V'> for the discretized state."""
    eps, r, u, kinetic, y = eigenvector(problem, n)
    p = y * y
    rv = float(np.sum(p * problem.r_dv(r)))
    return abs(2.0 * kinetic - rv) / abs(rv)


@dataclass
class ReferenceTable:
    """Grid of oracle eigenvalues keyed by (lam, n, ell); lam may be LOG."""

    values: dict = field(default_factory=dict)
    estimates: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)

    def value(self, lam, n, ell):
        return self.values[(_key(lam), n, ell)]

    def estimate(self, lam, n, ell):
        return self.estimates[(_key(lam), n, ell)]

    def has(self, lam, n, ell):
        return (_key(lam), n, ell) in self.values

    def grid(self, lam, n_max=3, ell_max=3):
        """Mapping (n, ell) -> eps for one exponent; raises listing missing cells."""
        key = _key(lam)
        missing = [(n, ell) for n in range(n_max + 1) for ell in range(ell_max + 1) if (key, n, ell) not in self.values]
        if missing:
            raise DomainError(f"reference table lacks entries for lam={lam}: {missing}")
        return {(n, ell): self.values[(key, n, ell)] for n in range(n_max + 1) for ell in range(ell_max + 1)}

    def __len__(self):
        return len(self.values)


def _key(lam):
    if lam == LOG or lam == 0:
        return LOG
    return float(lam)


def reference_table(
    lambdas: Sequence[Exponent],
    n_max: int = 3,
    ell_max: int = 3,
    mesh_size: int = DEFAULT_MESH_SIZE,
    tolerance: float = DEFAULT_TOLERANCE,
) -> ReferenceTable:
    """Oracle eigenvalues for every (lam, n, ell); failures are recorded per entry."""
    table = ReferenceTable()
    for lam in lambdas:
        key = _key(lam)
        for ell in range(ell_max + 1):
            try:
                sl = solve_radial(RadialProblem(key, ell, mesh_size=mesh_size), n_max, tolerance)
            except AuxspecError as exc:
                for n in range(n_max + 1):
                    table.errors[(key, n, ell)] = exc
                continue
            for n in range(n_max + 1):
                table.values[(key, n, ell)] = float(sl.eigenvalues[n])
                table.estimates[(key, n, ell)] = float(sl.convergence_estimate[n])
    return table


def physical_energy(lam: Exponent, eps: float, m: float, a: float, b: float = 1.0) -> float:
    """Map a dimensionless eigenvalue to the energy for mass m and strength a."""
    if _key(lam) == LOG:
        return log_physical_energy(eps, LogPotential(m, a, b))
    return dimensionless_prefactor(PowerLawPotential(m, a, float(lam))) * eps
