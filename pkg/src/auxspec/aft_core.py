"""Generic auxiliary-field approximation for an arbitrary central potential.

Given V(r) and a solvable base P(r) (harmonic ``r^2`` or Coulomb ``-1/r``):

1. K(r) = V'(r) / P'(r), inverted numerically on a bracket;
2. E(rho) = E_A(rho) + V(K^-1(rho)) - rho P(K^-1(rho));
3. rho0 solves dE/drho = 0.

By the envelope theorem dE/drho = E_A'(rho) - P(K^-1(rho)), so step 3 is a
bracketed root search on an exact derivative rather than a search on
function values.  The stationary point is a minimum for the harmonic base;
for the Coulomb base with lam > -1 it is a maximum of E(rho), which is still
the field selected by the stationarity condition.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .errors import BracketError, DomainError, MonotonicityError
from .potentials import QuantumNumbers

DEFAULT_RHO_BRACKET = (1e-8, 1e8)
DEFAULT_R_BRACKET = (1e-8, 1e8)
MAX_EXPANSIONS = 4
EXPANSION_FACTOR = 1e4
N_SAMPLES = 64
_RTOL = 4 * np.finfo(float).eps


class SolvableBase(enum.Enum):
    HARMONIC = "harmonic"
    COULOMB = "coulomb"

    def p(self, r):
        return r * r if self is SolvableBase.HARMONIC else -1.0 / r

    def dp(self, r):
        return 2.0 * r if self is SolvableBase.HARMONIC else 1.0 / (r * r)

    def principal(self, qn: QuantumNumbers) -> float:
        return qn.harmonic_n if self is SolvableBase.HARMONIC else qn.coulomb_n

    def spectrum(self, m, qn, rho):
        """E_A(rho) for ``p^2/2m + rho P(r)``."""
        if not rho > 0:
            raise DomainError(f"auxiliary field must be positive, got {rho}")
        big_n = self.principal(qn)
        if self is SolvableBase.HARMONIC:
            return math.sqrt(2.0 * rho / m) * big_n
        return -m * rho * rho / (2.0 * big_n * big_n)

    def spectrum_slope(self, m, qn, rho):
        """dE_A/drho."""
        big_n = self.principal(qn)
        if self is SolvableBase.HARMONIC:
            return big_n / math.sqrt(2.0 * rho * m)
        return -m * rho / (big_n * big_n)

    def average_point(self, m, qn, rho):
        """Radius r with P(r) equal to <P> in the base eigenstate."""
        big_n = self.principal(qn)
        if self is SolvableBase.HARMONIC:
            # <r^2> = N / (m omega), omega = sqrt(2 rho / m)
            return math.sqrt(big_n / math.sqrt(2.0 * m * rho))
        # <1/r> = m kappa / N^2
        return big_n * big_n / (m * rho)

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(f"unknown base {value!r}; expected 'harmonic' or 'coulomb'") from None


@dataclass(frozen=True)
class GenericPotential:
    """A user potential given by its value and first derivative.

    Unless ``check=False``, ``dv`` is compared with a central finite
    difference of ``v`` on ``check_grid`` (relative tolerance 1e-6).
    """

    v: Callable[[float], float]
    dv: Callable[[float], float]
    check: bool = True
    check_grid: tuple = tuple(np.logspace(-1, 1, 9))

    def __post_init__(self):
        if self.check:
            for r in self.check_grid:
                h = 1e-5 * r
                fd = (self.v(r + h) - self.v(r - h)) / (2 * h)
                ref = self.dv(r)
                if abs(fd - ref) > 1e-6 * max(abs(ref), abs(fd), 1e-300):
                    raise DomainError(
                        f"dv is not the derivative of v at r={r:g}: finite difference {fd:.10g} vs {ref:.10g}"
                    )


@dataclass(frozen=True)
class AuxFieldSolution:
    rho0: float
    r0: float
    energy: float
    qn: QuantumNumbers
    base: SolvableBase
    degenerate: bool = False  # K(r) constant: V = k P + const, the field is pinned


def k_function(pot, base, r):
    """K(r) = V'(r) / P'(r)."""
    if not r > 0:
        raise DomainError(f"r must be positive, got {r}")
    base = SolvableBase.parse(base)
    return pot.dv(r) / base.dp(r)


class _KInverter:
    """Inverts K on a bracket after a single monotonicity check."""

    def __init__(self, pot, base, bracket=DEFAULT_R_BRACKET):
        self.pot = pot
        self.base = SolvableBase.parse(base)
        lo, hi = bracket
        if not 0 < lo < hi:
            raise DomainError(f"invalid r bracket {bracket}")
        self.lo, self.hi = float(lo), float(hi)
        samples = np.array([self._k(r) for r in np.geomspace(self.lo, self.hi, N_SAMPLES)])
        if np.any(~np.isfinite(samples)) or np.any(samples <= 0):
            raise DomainError(
                "K(r) must be positive on the bracket; a repulsive base has no bound spectrum"
            )
        spread = samples.max() / samples.min() - 1.0
        self.constant = spread < 1e-12
        self.k_const = float(np.mean(samples)) if self.constant else None
        if not self.constant:
            steps = np.sign(np.diff(samples))
            if np.any(steps == 0) or np.any(steps != steps[0]):
                raise MonotonicityError("K(r) is not strictly monotonic on the bracket")
            self.increasing = steps[0] > 0

    def _k(self, r):
        return self.pot.dv(r) / self.base.dp(r)

    def __call__(self, rho):
        if not rho > 0:
            raise DomainError(f"rho must be positive, got {rho}")
        if self.constant:
            raise DomainError(f"K(r) is constant ({self.k_const:g}) and cannot be inverted")
        lo, hi = self.lo, self.hi
        log_rho = math.log(rho)

        def f(s):
            return math.log(self._k(math.exp(s))) - log_rho

        for _ in range(MAX_EXPANSIONS + 1):
            f_lo, f_hi = f(math.log(lo)), f(math.log(hi))
            if f_lo == 0:
                return lo
            if f_hi == 0:
                return hi
            if f_lo * f_hi < 0:
                s = brentq(f, math.log(lo), math.log(hi), xtol=1e-15, rtol=_RTOL, maxiter=500)
                return math.exp(s)
            lo, hi = lo / EXPANSION_FACTOR, hi * EXPANSION_FACTOR
        raise BracketError(f"rho={rho:g} lies outside K([{lo:g}, {hi:g}])")


def k_inverse(pot, base, rho, bracket=DEFAULT_R_BRACKET):
    """r with K(r) = rho, found by bracketed root finding in log r."""
    return _KInverter(pot, base, bracket)(rho)


def energy_with_field(pot, base, m, qn, rho, bracket=DEFAULT_R_BRACKET, _inverter=None):
    """E(rho) = E_A(rho) + V(r) - rho P(r) at r = K^-1(rho)."""
    base = SolvableBase.parse(base)
    inv = _inverter or _KInverter(pot, base, bracket)
    if inv.constant:
        if not math.isclose(rho, inv.k_const, rel_tol=1e-12):
            raise DomainError(f"K(r) is constant; the field is pinned at rho = {inv.k_const:g}")
        r = base.average_point(m, qn, rho)
    else:
        r = inv(rho)
    return base.spectrum(m, qn, rho) + pot.v(r) - rho * base.p(r)


def field_slope(pot, base, m, qn, rho, bracket=DEFAULT_R_BRACKET, _inverter=None):
    """dE/drho = E_A'(rho) - P(K^-1(rho))."""
    base = SolvableBase.parse(base)
    inv = _inverter or _KInverter(pot, base, bracket)
    return base.spectrum_slope(m, qn, rho) - base.p(inv(rho))


def minimize_field(pot, base, m, qn, bracket=DEFAULT_RHO_BRACKET, r_bracket=DEFAULT_R_BRACKET):
    """Locate the stationary auxiliary field rho0 and the corresponding energy.

    Since rho = K(r) is monotonic, the stationarity condition
    E_A'(rho) = P(K^-1(rho)) is scanned along r: the slope is sampled at
    geometric r points whose K(r) lies in ``bracket`` and the first sign
    change is refined with Brent's method in log r.  Without a sign change
    both brackets are widened up to four times before a
    :class:`BracketError` is raised.  Several stationary points are not
    detected; the one met first along the scan wins.
    """
    base = SolvableBase.parse(base)
    if not m > 0:
        raise DomainError(f"mass must be positive, got {m}")
    inv = _KInverter(pot, base, r_bracket)
    if inv.constant:
        rho0 = inv.k_const
        r0 = base.average_point(m, qn, rho0)
        energy = base.spectrum(m, qn, rho0) + pot.v(r0) - rho0 * base.p(r0)
        return AuxFieldSolution(rho0, r0, energy, qn, base, degenerate=True)

    def slope(s):
        r = math.exp(s)
        return base.spectrum_slope(m, qn, inv._k(r)) - base.p(r)

    rho_lo, rho_hi = bracket
    if not 0 < rho_lo < rho_hi:
        raise DomainError(f"invalid rho bracket {bracket}")
    r_lo, r_hi = inv.lo, inv.hi
    for _ in range(MAX_EXPANSIONS + 1):
        grid = np.linspace(math.log(r_lo), math.log(r_hi), 4 * N_SAMPLES)
        ks = np.array([inv._k(math.exp(s)) for s in grid])
        inside = (ks >= rho_lo) & (ks <= rho_hi)
        values = [slope(s) if ok else math.nan for s, ok in zip(grid, inside)]
        s0 = None
        for i in range(len(grid) - 1):
            if not (inside[i] and inside[i + 1]):
                continue
            if values[i] == 0:
                s0 = grid[i]
            elif values[i] * values[i + 1] < 0:
                s0 = brentq(slope, grid[i], grid[i + 1], xtol=1e-15, rtol=_RTOL, maxiter=500)
            if s0 is not None:
                break
        if s0 is None:
            rho_lo, rho_hi = rho_lo / EXPANSION_FACTOR, rho_hi * EXPANSION_FACTOR
            r_lo, r_hi = r_lo / EXPANSION_FACTOR, r_hi * EXPANSION_FACTOR
            continue
        r0 = math.exp(s0)
        rho0 = inv._k(r0)
        energy = base.spectrum(m, qn, rho0) + pot.v(r0) - rho0 * base.p(r0)
        return AuxFieldSolution(rho0, r0, energy, qn, base)
    raise BracketError(
        f"E(rho) has no stationary point for rho in [{rho_lo:g}, {rho_hi:g}]; expand the bracket"
    )


def effective_potential(pot, base, r, rho, bracket=DEFAULT_R_BRACKET):
    """V~(r, rho) = rho P(r) + V(K^-1(rho)) - rho P(K^-1(rho))."""
    base = SolvableBase.parse(base)
    x = k_inverse(pot, base, rho, bracket)
    return rho * base.p(r) + pot.v(x) - rho * base.p(x)
