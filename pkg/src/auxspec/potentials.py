"""Potential types, the dimensionless reduction and the scaling laws.

Every power-law problem ``p^2/2m + sgn(lam) a r^lam`` maps onto the
dimensionless Hamiltonian ``q^2/4 + sgn(lam) |x|^lam`` (m=2, a=1).  The
eigenvalues eps(lam, n, l) of the latter carry all the spectral content;
:func:`dimensionless_prefactor` turns them back into physical energies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import DomainError, NoBoundStateError, ScalingConstraintError

#: Marker used in place of an exponent for the logarithmic potential.
LOG = "log"

Exponent = Union[float, str]


@dataclass(frozen=True, order=True)
class QuantumNumbers:
    """Radial (``n``) and orbital (``ell``) quantum numbers."""

    n: int
    ell: int

    def __post_init__(self):
        for name in ("n", "ell"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 0:
                raise DomainError(f"{name} must be a nonnegative integer, got {value!r}")
            object.__setattr__(self, name, int(value))

    @property
    def harmonic_n(self) -> float:
        """2n + l + 3/2, the principal combination of the oscillator."""
        return 2 * self.n + self.ell + 1.5

    @property
    def coulomb_n(self) -> int:
        """n + l + 1, the principal quantum number of the Coulomb problem."""
        return self.n + self.ell + 1


@dataclass(frozen=True)
class PowerLawPotential:
    """V(r) = sgn(lam) a r^lam for a particle of mass ``m``.

    Exponents ``lam <= -2`` are representable; energy evaluations reject them.
    """

    m: float
    a: float
    lam: float

    def __post_init__(self):
        if not self.m > 0:
            raise DomainError(f"mass must be positive, got {self.m}")
        if not self.a > 0:
            raise DomainError(f"coupling must be positive, got {self.a}")
        if self.lam == 0:
            raise DomainError("lam = 0 is the logarithmic case, use LogPotential")

    @property
    def sign(self) -> float:
        return 1.0 if self.lam > 0 else -1.0

    def v(self, r):
        return self.sign * self.a * r**self.lam

    def dv(self, r):
        return self.a * abs(self.lam) * r ** (self.lam - 1)

    def require_bound(self):
        """Raise unless the exponent admits a bound spectrum (lam > -2)."""
        check_exponent(self.lam)


@dataclass(frozen=True)
class LogPotential:
    """V(r) = a ln(b r) for a particle of mass ``m``."""

    m: float
    a: float
    b: float

    def __post_init__(self):
        for name in ("m", "a", "b"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")

    def v(self, r):
        return self.a * math.log(self.b * r)

    def dv(self, r):
        return self.a / r


@dataclass(frozen=True)
class DimensionlessState:
    """A state of ``q^2/4 + sgn(lam)|x|^lam`` (or ``q^2/4 + ln|x|`` when lam is LOG)."""

    lam: Exponent
    qn: QuantumNumbers

    def __post_init__(self):
        if self.lam != LOG:
            check_exponent(float(self.lam))

    @property
    def is_log(self) -> bool:
        return self.lam == LOG


def check_exponent(lam: float) -> None:
    """Reject exponents without a bound spectrum and the log point lam = 0."""
    if lam == 0:
        raise DomainError("lam = 0 is the logarithmic case")
    if lam == -2:
        raise NoBoundStateError("energy formulas are singular at lam = -2")
    if lam < -2:
        raise NoBoundStateError(f"no bound states for lam = {lam} < -2")


def dimensionless_prefactor(pot: PowerLawPotential) -> float:
    """Factor mapping eps(lam, n, l) to E(m, a; lam, n, l).

    Returns ``2^(lam/(lam+2)) a^(2/(lam+2)) m^(-lam/(lam+2))``.
    """
    lam = pot.lam
    if lam == -2:
        raise DomainError("prefactor exponent is singular at lam = -2")
    s = lam + 2.0
    return 2.0 ** (lam / s) * pot.a ** (2.0 / s) * pot.m ** (-lam / s)


def scale_energy(e_ref, m, m_ref, gamma, gamma_ref, alpha, alpha_ref, rtol=1e-12):
    """Energy of ``p^2/2m + gamma V(alpha r)`` from the primed problem's energy.

    The two problems are related only when
    ``gamma = gamma_ref (alpha/alpha_ref)^2 (m_ref/m)``; otherwise a
    :class:`ScalingConstraintError` reporting the residual is raised.
    """
    for name, val in (("m", m), ("m_ref", m_ref), ("alpha", alpha), ("alpha_ref", alpha_ref)):
        if not val > 0:
            raise DomainError(f"{name} must be positive, got {val}")
    factor = (alpha / alpha_ref) ** 2 * (m_ref / m)
    expected = gamma_ref * factor
    residual = gamma - expected
    if abs(residual) > rtol * max(abs(gamma), abs(expected)):
        raise ScalingConstraintError(
            f"gamma constraint violated: gamma - gamma_ref*(alpha/alpha_ref)^2*(m_ref/m) = {residual:.3e}"
        )
    return factor * e_ref


def log_mass_shift(e, a, alpha):
    """E(alpha m) for the logarithmic potential: E(m) - (a/2) ln(alpha)."""
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    return e - 0.5 * a * math.log(alpha)


def log_physical_energy(eps, pot: LogPotential):
    """Map an eigenvalue of ``q^2/4 + ln|x|`` to the energy of ``pot``.

    With r = x sqrt(2/(m a)) the Hamiltonian becomes
    ``a (q^2/4 + ln x) + a ln(b sqrt(2/(m a)))``.
    """
    return pot.a * eps + pot.a * math.log(pot.b * math.sqrt(2.0 / (pot.m * pot.a)))
