"""Analytic energy formulas for power-law and logarithmic potentials.

Powers are taken in ``numpy.longdouble`` so that the exponents
2/(lam+2), which blow up near lam = -2, do not amplify double rounding.
"""
from __future__ import annotations

import enum
import math
import warnings

import numpy as np
from scipy.special import gamma

from .aft_core import SolvableBase
from .errors import DomainError, NoBoundStateError, PoleError
from .potentials import LogPotential, PowerLawPotential, QuantumNumbers, check_exponent

LD = np.longdouble
SIGMA = math.sqrt(3.0) * math.pi

SUPPORTED_RANGE = (-2.0, 6.0)  # open at -2, closed at 6
TRUSTED_RANGE = (-1.5, 4.0)


class ExtrapolationWarning(UserWarning):
    """The improved or WKB formula is evaluated outside [-3/2, 4]."""


class CoeffFamily(enum.Enum):
    """Parameterizations of b(lam), c(lam) in N = b n + l + c."""

    EXACT_PAIR = "bc1"
    LINEAR = "bc2"
    HYPERBOLA_AIRY = "bc3"
    HYPERBOLA_FIT = "bc4"

    def coefficients(self, lam):
        """Return (b(lam), c(lam))."""
        lam = float(lam)
        if self is CoeffFamily.EXACT_PAIR:
            if lam > 0:
                return 2.0, 1.5
            if -2 < lam < 0:
                return 1.0, 1.0
            if lam == 0:
                raise DomainError("bc1 is undefined at lam = 0; use a continuous family (bc2, bc3, bc4)")
            raise NoBoundStateError(f"bc1 is defined for lam > -2 only, got {lam}")
        if self is CoeffFamily.LINEAR:
            return (lam + 4.0) / 3.0, (lam + 7.0) / 6.0
        if self is CoeffFamily.HYPERBOLA_AIRY:
            s = SIGMA
            return (
                _ratio((4 * s - 18) * lam + (18 - 2 * s), (3 * s - 15) * lam + (21 - 3 * s), lam, "b"),
                _ratio((7 * s - 36) * lam + (36 - 5 * s), (6 * s - 32) * lam + (40 - 6 * s), lam, "c"),
            )
        return (
            _ratio(41 * lam + 86, 13 * lam + 58, lam, "b"),
            _ratio(5 * lam + 17, 2 * lam + 14, lam, "c"),
        )

    def b(self, lam):
        return self.coefficients(lam)[0]

    def c(self, lam):
        return self.coefficients(lam)[1]

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).lower().removeprefix("improved-")
        for member in cls:
            if key in (member.value, member.name.lower()):
                return member
        raise DomainError(f"unknown coefficient family {value!r}")


def _ratio(num, den, lam, which):
    if den == 0:
        raise PoleError(f"{which}(lam) has a pole at lam = {lam}")
    return num / den


def _power_energy(lam, coupling, m, big_n):
    """((2+lam)/(2 lam)) (coupling |lam|)^(2/(lam+2)) m^(-lam/(lam+2)) N^(2 lam/(lam+2))."""
    lam_ld = LD(lam)
    s = lam_ld + 2
    value = (
        (2 + lam_ld) / (2 * lam_ld)
        * (LD(coupling) * abs(lam_ld)) ** (2 / s)
        * LD(m) ** (-lam_ld / s)
        * LD(big_n) ** (2 * lam_ld / s)
    )
    return float(value)


def eh_energy(pot: PowerLawPotential, qn: QuantumNumbers) -> float:
    """Auxiliary-field energy with the harmonic base."""
    check_exponent(pot.lam)
    return _power_energy(pot.lam, pot.a, pot.m, qn.harmonic_n)


def ec_energy(pot: PowerLawPotential, qn: QuantumNumbers) -> float:
    """Auxiliary-field energy with the Coulomb base."""
    check_exponent(pot.lam)
    if pot.lam == -1:
        return -pot.m * pot.a**2 / (2.0 * qn.coulomb_n**2)
    return _power_energy(pot.lam, pot.a, pot.m, qn.coulomb_n)


def rho0_harmonic(pot: PowerLawPotential, qn: QuantumNumbers) -> float:
    lam = LD(pot.lam)
    check_exponent(pot.lam)
    s = lam + 2
    value = (
        LD(0.5)
        * (LD(qn.harmonic_n) / np.sqrt(LD(pot.m))) ** (2 * (lam - 2) / s)
        * (LD(pot.a) * abs(lam)) ** (4 / s)
    )
    return float(value)


def rho0_coulomb(pot: PowerLawPotential, qn: QuantumNumbers) -> float:
    check_exponent(pot.lam)
    if pot.lam == -1:
        return float(pot.a)
    lam = LD(pot.lam)
    inner = (LD(pot.a) * abs(lam)) ** (1 / (lam + 1)) * LD(qn.coulomb_n) ** 2 / LD(pot.m)
    return float(inner ** ((lam + 1) / (lam + 2)))


def aft_energy(pot: PowerLawPotential, qn: QuantumNumbers, base) -> float:
    base = SolvableBase.parse(base)
    return eh_energy(pot, qn) if base is SolvableBase.HARMONIC else ec_energy(pot, qn)


def aft_rho0(pot: PowerLawPotential, qn: QuantumNumbers, base) -> float:
    base = SolvableBase.parse(base)
    return rho0_harmonic(pot, qn) if base is SolvableBase.HARMONIC else rho0_coulomb(pot, qn)


def log_energy(pot: LogPotential, qn: QuantumNumbers, base) -> float:
    """a ln[sqrt(e/(m a)) b N] with N the principal combination of ``base``."""
    big_n = SolvableBase.parse(base).principal(qn)
    return pot.a * math.log(math.sqrt(math.e / (pot.m * pot.a)) * pot.b * big_n)


def log_rho0(pot: LogPotential, qn: QuantumNumbers, base) -> float:
    base = SolvableBase.parse(base)
    big_n = base.principal(qn)
    if base is SolvableBase.HARMONIC:
        return pot.m * pot.a**2 / (2.0 * big_n**2)
    return math.sqrt(pot.a / pot.m) * big_n


def epsilon_app(lam, big_n) -> float:
    """Dimensionless auxiliary-field eigenvalue for the combination ``big_n``."""
    check_exponent(lam)
    if not big_n > 0:
        raise DomainError(f"N must be positive, got {big_n}")
    lam_ld = LD(lam)
    s = lam_ld + 2
    value = (
        (2 + lam_ld) / (2 * lam_ld)
        * abs(lam_ld) ** (2 / s)
        / LD(2) ** (lam_ld / s)
        * LD(big_n) ** (2 * lam_ld / s)
    )
    return float(value)


def _check_improved_range(lam, what):
    check_exponent(lam)
    if lam > SUPPORTED_RANGE[1]:
        raise DomainError(f"{what} is supported for -2 < lam <= 6, got {lam}")
    if not TRUSTED_RANGE[0] <= lam <= TRUSTED_RANGE[1]:
        warnings.warn(f"{what} at lam = {lam} is an extrapolation", ExtrapolationWarning, stacklevel=3)


def improved_n(lam, qn: QuantumNumbers, family) -> float:
    b, c = CoeffFamily.parse(family).coefficients(lam)
    return b * qn.n + qn.ell + c


def improved_epsilon(lam, qn: QuantumNumbers, family) -> float:
    """epsilon_app evaluated at N = b(lam) n + l + c(lam)."""
    _check_improved_range(lam, "improved formula")
    return epsilon_app(lam, improved_n(lam, qn, family))


def improved_epsilon_bc(lam, n, ell, b, c) -> float:
    """Improved formula with explicit coefficients; lam = 0 selects the log form."""
    big_n = b * n + ell + c
    if not big_n > 0:
        raise DomainError(f"N = b n + l + c must be positive, got {big_n} at (n, l) = ({n}, {ell})")
    if lam == 0:
        return math.log(math.sqrt(math.e / 2.0) * big_n)
    return epsilon_app(lam, big_n)


def improved_log_epsilon(qn: QuantumNumbers, family) -> float:
    """ln[sqrt(e/2) (b(0) n + l + c(0))] for ``q^2/4 + ln|x|``."""
    family = CoeffFamily.parse(family)
    b, c = family.coefficients(0.0)
    return math.log(math.sqrt(math.e / 2.0) * (b * qn.n + qn.ell + c))


def wkb_epsilon(lam, qn: QuantumNumbers) -> float:
    """Two-branch semiclassical estimate of eps(lam, n, l)."""
    if lam == 0:
        raise DomainError("the WKB formula is not available at lam = 0")
    _check_improved_range(lam, "WKB formula")
    n, ell = qn.n, qn.ell
    expo = 2 * lam / (lam + 2)
    if lam > 0:
        k = lam * math.sqrt(math.pi) * gamma(1.5 + 1 / lam) / (2 * gamma(1 / lam))
        return (k * (2 * n + ell + 1.5)) ** expo
    k = abs(lam) * math.sqrt(math.pi) * gamma(1 - 1 / lam) / (2 * gamma(-0.5 - 1 / lam))
    return -((k * (2 * n + 2 - (1 + lam - 2 * ell) / (2 + lam))) ** expo)


def airy_epsilon(n: int) -> float:
    """Large-n estimate (3 pi/4)^(2/3) (n + 3/4)^(2/3) of eps(1, n, 0)."""
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    return (0.75 * math.pi * (n + 0.75)) ** (2.0 / 3.0)


def power_limit_to_log(lam, pot: LogPotential, qn: QuantumNumbers, base) -> float:
    """Energy of ``p^2/2m + (a/lam)[(b r)^lam - 1]``, which tends to the log case.

    The power-law term is the ``base`` closed form at coupling
    ``a b^lam / |lam|``; the constant ``-a/lam`` is subtracted in extended
    precision because both pieces grow like 1/lam.
    """
    if lam == 0:
        raise DomainError("use log_energy at lam = 0")
    if abs(lam) > 0.1:
        raise DomainError(f"power_limit_to_log expects 0 < |lam| <= 0.1, got {lam}")
    big_n = SolvableBase.parse(base).principal(qn)
    lam_ld = LD(lam)
    s = lam_ld + 2
    a, b, m = LD(pot.a), LD(pot.b), LD(pot.m)
    value = (
        (2 + lam_ld) / (2 * lam_ld)
        * (a * b**lam_ld) ** (2 / s)
        * m ** (-lam_ld / s)
        * LD(big_n) ** (2 * lam_ld / s)
        - a / lam_ld
    )
    return float(value)
