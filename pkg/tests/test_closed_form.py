import math
import warnings

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from auxspec import closed_form as cf
from auxspec.closed_form import CoeffFamily, ExtrapolationWarning
from auxspec.errors import DomainError, NoBoundStateError, PoleError
from auxspec.potentials import LogPotential, PowerLawPotential, QuantumNumbers

lams = st.floats(-1.9, 4.0).filter(lambda x: abs(x) > 1e-3)
qns = st.builds(QuantumNumbers, st.integers(0, 6), st.integers(0, 6))


def _eps_mp(lam, big_n):
    mp.mp.dps = 40
    lam, big_n = mp.mpf(lam), mp.mpf(big_n)
    return float((2 + lam) / (2 * lam) * abs(lam) ** (2 / (lam + 2)) * 2 ** (-lam / (lam + 2)) * big_n ** (2 * lam / (lam + 2)))


def test_linear_ground_state_harmonic_value():
    # eps(1) at N = 3/2: (3/2) 2^(-1/3) (3/2)^(2/3)
    want = 1.5 * 2 ** (-1 / 3) * 1.5 ** (2 / 3)
    assert cf.epsilon_app(1.0, 1.5) == pytest.approx(want, rel=1e-15)
    assert want == pytest.approx(1.56006, abs=5e-6)


@given(lams, st.floats(0.5, 20.0))
@settings(max_examples=200, deadline=None)
def test_epsilon_app_against_multiprecision(lam, big_n):
    assert cf.epsilon_app(lam, big_n) == pytest.approx(_eps_mp(lam, big_n), rel=1e-13)


def test_epsilon_app_near_minus_two_is_stable():
    lam = -1.999
    assert cf.epsilon_app(lam, 3.0) == pytest.approx(_eps_mp(lam, 3.0), rel=1e-12)


@given(qns)
@settings(max_examples=50, deadline=None)
def test_exact_cases(qn):
    osc = PowerLawPotential(2.0, 1.0, 2.0)
    hyd = PowerLawPotential(2.0, 1.0, -1.0)
    assert cf.eh_energy(osc, qn) == pytest.approx(qn.harmonic_n, rel=1e-14)
    assert cf.ec_energy(hyd, qn) == pytest.approx(-1.0 / qn.coulomb_n**2, rel=1e-14)


def test_physical_oscillator_and_hydrogen():
    qn = QuantumNumbers(1, 0)
    # p^2/2m + a r^2, omega = sqrt(2a/m)
    assert cf.eh_energy(PowerLawPotential(0.5, 2.0, 2.0), qn) == pytest.approx(math.sqrt(8.0) * 3.5)
    assert cf.ec_energy(PowerLawPotential(3.0, 0.5, -1.0), qn) == pytest.approx(-3.0 * 0.25 / 8.0)


def test_rho0_closed_forms():
    qn = QuantumNumbers(0, 1)
    assert cf.rho0_harmonic(PowerLawPotential(1.0, 4.0, 2.0), qn) == pytest.approx(4.0)
    assert cf.rho0_coulomb(PowerLawPotential(1.0, 4.0, -1.0), qn) == 4.0
    assert cf.aft_rho0(PowerLawPotential(1.0, 4.0, 2.0), qn, "harmonic") == pytest.approx(4.0)


def test_energy_rejects_bad_exponent():
    with pytest.raises(NoBoundStateError):
        cf.eh_energy(PowerLawPotential(1.0, 1.0, -2.0), QuantumNumbers(0, 0))


def test_log_energy_examples():
    qn = QuantumNumbers(0, 0)
    assert cf.log_energy(LogPotential(1.0, 1.0, 1.0), qn, "coulomb") == pytest.approx(0.5)
    # harmonic base: ln(sqrt(e) * 3/2)
    assert cf.log_energy(LogPotential(1.0, 1.0, 1.0), qn, "harmonic") == pytest.approx(0.5 + math.log(1.5))
    assert cf.log_rho0(LogPotential(1.0, 1.0, 1.0), qn, "coulomb") == pytest.approx(1.0)


def test_coefficient_families_at_one():
    b, c = CoeffFamily.HYPERBOLA_AIRY.coefficients(1.0)
    assert b == pytest.approx(math.pi / math.sqrt(3.0), rel=1e-14)
    assert c == pytest.approx(math.sqrt(3.0) * math.pi / 4.0, rel=1e-14)
    assert CoeffFamily.LINEAR.coefficients(1.0) == pytest.approx((5 / 3, 4 / 3))
    assert CoeffFamily.HYPERBOLA_FIT.coefficients(1.0) == pytest.approx((127 / 71, 22 / 16))


def test_coefficient_family_errors():
    with pytest.raises(DomainError):
        CoeffFamily.EXACT_PAIR.coefficients(0.0)
    with pytest.raises(PoleError):
        CoeffFamily.HYPERBOLA_FIT.coefficients(-7.0)
    assert CoeffFamily.parse("improved-bc3") is CoeffFamily.HYPERBOLA_AIRY
    assert CoeffFamily.parse("linear") is CoeffFamily.LINEAR
    with pytest.raises(DomainError):
        CoeffFamily.parse("bc9")


def test_table2_improved_lines():
    # first entries of the bc3 and bc4 lines for lam = 1
    assert cf.improved_epsilon(1.0, QuantumNumbers(0, 0), "bc3") == pytest.approx(1.46167, abs=1e-5)
    assert cf.improved_epsilon(1.0, QuantumNumbers(0, 0), "bc4") == pytest.approx(1.47214, abs=1e-5)
    assert cf.improved_epsilon(1.0, QuantumNumbers(3, 3), "bc4") == pytest.approx(5.43029, abs=1e-5)


def test_improved_log_form():
    qn = QuantumNumbers(1, 2)
    b, c = CoeffFamily.HYPERBOLA_FIT.coefficients(0.0)
    want = math.log(math.sqrt(math.e / 2.0) * (b + 2 + c))
    assert cf.improved_log_epsilon(qn, "bc4") == pytest.approx(want)
    assert cf.improved_epsilon_bc(0.0, 1, 2, b, c) == pytest.approx(want)
    with pytest.raises(DomainError):
        cf.improved_log_epsilon(qn, "bc1")


def test_improved_range_handling():
    qn = QuantumNumbers(0, 0)
    with pytest.warns(ExtrapolationWarning):
        cf.improved_epsilon(5.0, qn, "bc4")
    with pytest.warns(ExtrapolationWarning):
        cf.wkb_epsilon(-1.8, qn)
    with pytest.raises(DomainError):
        cf.improved_epsilon(6.5, qn, "bc4")
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        cf.improved_epsilon(4.0, qn, "bc3")
        cf.improved_epsilon(-1.5, qn, "bc3")


@given(qns)
@settings(max_examples=30, deadline=None)
def test_wkb_exact_cases(qn):
    assert cf.wkb_epsilon(2.0, qn) == pytest.approx(qn.harmonic_n, rel=1e-13)
    assert cf.wkb_epsilon(-1.0, qn) == pytest.approx(-1.0 / qn.coulomb_n**2, rel=1e-13)


def test_wkb_rejects_log():
    with pytest.raises(DomainError):
        cf.wkb_epsilon(0.0, QuantumNumbers(0, 0))


def test_airy_matches_wkb_for_linear_s_waves():
    for n in range(11):
        assert cf.airy_epsilon(n) == pytest.approx(cf.wkb_epsilon(1.0, QuantumNumbers(n, 0)), rel=1e-13)
    with pytest.raises(DomainError):
        cf.airy_epsilon(-1)


def test_power_limit_to_log():
    pot = LogPotential(1.0, 1.0, 1.0)
    qn = QuantumNumbers(2, 1)
    for base in ("harmonic", "coulomb"):
        want = cf.log_energy(pot, qn, base)
        assert cf.power_limit_to_log(1e-7, pot, qn, base) == pytest.approx(want, abs=1e-6)
    with pytest.raises(DomainError):
        cf.power_limit_to_log(0.5, pot, qn, "harmonic")
    with pytest.raises(DomainError):
        cf.power_limit_to_log(0.0, pot, qn, "harmonic")
