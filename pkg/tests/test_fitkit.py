import math

import numpy as np
import pytest

from auxspec import fitkit
from auxspec.closed_form import CoeffFamily, epsilon_app
from auxspec.errors import DomainError, PoleError, RankError
from auxspec.fitkit import RationalFit, chi_family, chi_measure, chi_wkb, fit_bc, fit_hyperbola
from auxspec.potentials import LOG


def _exact_grid(lam, b, c):
    return {(n, l): epsilon_app(lam, b * n + l + c) for n in range(4) for l in range(4)}


def test_chi_vanishes_on_its_own_coefficients():
    grid = _exact_grid(1.0, 1.8, 1.4)
    assert chi_measure(1.0, 1.8, 1.4, grid) == 0.0
    assert chi_measure(1.0, 1.8, 1.4, grid, measure="relative") == 0.0
    assert chi_measure(1.0, 1.8, 1.5, grid) > 0.0
    with pytest.raises(DomainError):
        chi_measure(1.0, 1.8, 1.4, grid, measure="max")
    with pytest.raises(DomainError, match="lacks"):
        chi_measure(1.0, 1.8, 1.4, {(0, 0): 1.0})


def test_chi_wkb_rejects_log(fit_reference):
    with pytest.raises(DomainError):
        chi_wkb(LOG, fit_reference)


def test_fit_recovers_planted_coefficients():
    grid = _exact_grid(0.5, 1.6, 1.3)
    fit = fit_bc(0.5, grid)
    assert (fit.b_opt, fit.c_opt) == pytest.approx((1.6, 1.3), abs=1e-7)
    assert fit.chi < 1e-14


def test_fit_at_linear_potential(fit_reference):
    # the optimum lies between the bc3 and bc4 predictions, with chi below both
    fit = fit_bc(1.0, fit_reference)
    b3, c3 = CoeffFamily.HYPERBOLA_AIRY.coefficients(1.0)
    b4, c4 = CoeffFamily.HYPERBOLA_FIT.coefficients(1.0)
    assert min(b3, b4) <= fit.b_opt <= max(b3, b4)
    assert min(c3, c4) <= fit.c_opt <= max(c3, c4)
    assert fit.b_opt == pytest.approx(1.7920, abs=2e-4)
    assert fit.c_opt == pytest.approx(1.3695, abs=2e-4)
    assert fit.chi == pytest.approx(0.00205, abs=2e-5)


@pytest.mark.parametrize("lam", [-1.5, -0.5, LOG, 0.5, 1.5, 3.0, 4.0])
def test_fit_beats_every_family(lam, fit_reference):
    fit = fit_bc(lam, fit_reference)
    for fam in CoeffFamily:
        try:
            chi = chi_family(lam, fam, fit_reference)
        except DomainError:
            continue
        assert fit.chi <= chi * (1 + 1e-9)


def test_hyperbola_exact_recovery_with_constraints():
    lam = np.linspace(-1.5, 4.0, 12)
    pts = [(x, CoeffFamily.HYPERBOLA_FIT.c(x)) for x in lam]
    hyp = fit_hyperbola(pts, constraints=[(-1.0, 1.0), (2.0, 1.5)])
    np.testing.assert_allclose(hyp.normalized(14.0), (5, 17, 2, 14), atol=1e-9)
    assert hyp(-1.0) == pytest.approx(1.0, abs=1e-13)
    assert hyp(2.0) == pytest.approx(1.5, abs=1e-13)


def test_hyperbola_constraints_hold_on_noisy_data():
    rng = np.random.default_rng(3)
    lam = np.linspace(-1.5, 4.0, 20)
    vals = [CoeffFamily.HYPERBOLA_FIT.b(x) + 0.01 * rng.standard_normal() for x in lam]
    hyp = fit_hyperbola(list(zip(lam, vals)), constraints=[(-1.0, 1.0), (2.0, 2.0)])
    assert hyp(-1.0) == pytest.approx(1.0, abs=1e-12)
    assert hyp(2.0) == pytest.approx(2.0, abs=1e-12)


def test_hyperbola_degenerate_inputs():
    lam = np.linspace(0.0, 3.0, 6)
    with pytest.raises(RankError):
        fit_hyperbola([(x, 1.0) for x in lam])
    with pytest.raises(DomainError):
        fit_hyperbola([(0.0, 1.0), (1.0, 2.0), (2.0, 2.5)])
    with pytest.raises(DomainError, match="distinct"):
        fit_hyperbola([(0.0, 1.0), (0.0, 2.0), (2.0, 2.5), (3.0, 2.7)])


def test_rational_fit_pole_detection():
    with pytest.raises(PoleError):
        RationalFit((1.0, 0.0), (1.0, 1.0), interval=(-2.0, 0.0))
    fit = RationalFit((1.0, 0.0), (1.0, 1.0), interval=(0.0, 3.0))
    assert fit(1.0) == pytest.approx(0.5)
    assert fit.normalized(2.0) == (2.0, 0.0, 2.0, 2.0)


def test_coefficient_curves(fit_reference):
    fits = fitkit.fit_grid([-1.0, LOG, 2.0], fit_reference)
    b_rows, c_rows = fitkit.coefficient_curves(fits)
    assert b_rows.shape == (3, 5) and c_rows.shape == (3, 5)
    np.testing.assert_allclose(b_rows[0, 1:], 1.0, atol=1e-6)
    np.testing.assert_allclose(c_rows[2, 1:], 1.5, atol=1e-6)
    assert b_rows[1, 0] == 0.0
    assert b_rows[1, 3] == pytest.approx(CoeffFamily.HYPERBOLA_AIRY.b(0.0))
