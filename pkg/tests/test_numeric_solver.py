import math

import numpy as np
import pytest
from scipy.special import ai_zeros

from auxspec.errors import ConvergenceError, DomainError, NoBoundStateError
from auxspec.numeric_solver import (
    LOG,
    RadialProblem,
    eigenvector,
    physical_energy,
    reference_table,
    solve_radial,
    virial_residual,
)
from auxspec.potentials import LogPotential, PowerLawPotential, QuantumNumbers
from auxspec import closed_form


def test_linear_s_waves_match_airy_zeros():
    # q^2/4 + x with u(0) = 0: eps_n = |a_n| / 4^(1/3)
    exact = -ai_zeros(8)[0] / 4 ** (1 / 3)
    sl = solve_radial(RadialProblem(1.0, 0), 7)
    np.testing.assert_allclose(sl.eigenvalues, exact, atol=1e-8)
    assert np.all(sl.convergence_estimate <= 5e-6)


@pytest.mark.parametrize("ell", [0, 2, 5])
def test_exact_spectra(ell):
    osc = solve_radial(RadialProblem(2.0, ell), 5).eigenvalues
    hyd = solve_radial(RadialProblem(-1.0, ell), 5).eigenvalues
    n = np.arange(6)
    np.testing.assert_allclose(osc, 2 * n + ell + 1.5, atol=1e-8)
    np.testing.assert_allclose(hyd, -1.0 / (n + ell + 1) ** 2, atol=1e-8)


def test_table2_numerical_line():
    sl = solve_radial(RadialProblem(1.0, 3), 3)
    np.testing.assert_allclose(sl.eigenvalues, [3.18188, 3.98898, 4.72763, 5.41584], atol=1e-5)


def test_aft_energies_bound_the_oracle():
    # harmonic-base energies lie above the eigenvalues for lam < 2, Coulomb-base ones below for lam > -1
    eps = solve_radial(RadialProblem(1.0, 1), 3).eigenvalues
    for n in range(4):
        qn = QuantumNumbers(n, 1)
        assert closed_form.epsilon_app(1.0, qn.harmonic_n) > eps[n]
        assert closed_form.epsilon_app(1.0, qn.coulomb_n) < eps[n]


def test_log_potential_is_monotone_and_converged():
    sl = solve_radial(RadialProblem(LOG, 1), 3)
    assert np.all(np.diff(sl.eigenvalues) > 0)
    assert np.all(sl.convergence_estimate <= 5e-6)


@pytest.mark.parametrize("lam", [-1.5, 0.5, 1.0, 4.0])
def test_discrete_virial_theorem(lam):
    assert virial_residual(RadialProblem(lam, 1), 1) < 1e-8


def test_eigenvector_is_normalized():
    eps, r, u, kinetic, y = eigenvector(RadialProblem(1.0, 0), 0)
    assert eps == pytest.approx(1.47292, abs=1e-5)
    h = math.log(r[1] / r[0])
    assert np.sum(u * u * r) * h == pytest.approx(1.0, abs=1e-12)  # integral u^2 dr = integral u^2 r dt
    assert np.trapezoid(u * u, r) == pytest.approx(1.0, abs=1e-5)


def test_problem_validation():
    with pytest.raises(NoBoundStateError):
        RadialProblem(-2.0, 0)
    with pytest.raises(DomainError):
        RadialProblem(0.0, 0)
    with pytest.raises(DomainError):
        RadialProblem(1.0, -1)
    with pytest.raises(DomainError):
        RadialProblem(1.0, 0, mesh_size=10)
    with pytest.raises(DomainError):
        solve_radial(RadialProblem(1.0, 0, mesh_size=64), 40)


def test_convergence_error_carries_best_estimate():
    with pytest.raises(ConvergenceError) as info:
        solve_radial(RadialProblem(1.0, 0, mesh_size=64), 2, tolerance=1e-30)
    assert info.value.best is not None
    assert info.value.best[0] == pytest.approx(1.47292, abs=1e-3)
    assert np.all(np.asarray(info.value.uncertainty) >= 0)


def test_reference_table_records_failures():
    table = reference_table([1.0, 2.0], n_max=1, ell_max=1, mesh_size=64, tolerance=1e-30)
    assert len(table) == 0
    assert len(table.errors) == 8
    with pytest.raises(DomainError, match="lacks entries"):
        table.grid(1.0, 1, 1)


def test_reference_table_keys():
    table = reference_table([LOG, 2.0], n_max=1, ell_max=0)
    assert table.has(0.0, 0, 0) and table.has(LOG, 1, 0)
    assert table.value(2.0, 1, 0) == pytest.approx(3.5, abs=1e-8)
    assert set(table.grid(2.0, 1, 0)) == {(0, 0), (1, 0)}


def test_physical_energy():
    assert physical_energy(2.0, 1.5, m=0.5, a=2.0) == pytest.approx(1.5 * math.sqrt(8.0))
    eps = 0.3
    assert physical_energy(LOG, eps, m=1.0, a=1.0, b=1.0) == pytest.approx(eps + 0.5 * math.log(2.0))
    pot = PowerLawPotential(1.3, 0.7, 1.0)
    assert physical_energy(1.0, 2.0, pot.m, pot.a) == pytest.approx(
        2.0 * closed_form.eh_energy(pot, QuantumNumbers(0, 0)) / closed_form.epsilon_app(1.0, 1.5)
    )
