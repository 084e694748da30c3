"""Comparison of the improved formula with oracle eigenvalues.

``chi(lam)`` sums the squared deviations over the 4x4 grid n, l in 0..3.
:func:`fit_bc` finds the (b, c) pair minimizing it, and
:func:`fit_hyperbola` fits rational curves (p1 lam + p2)/(p3 lam + p4)
through the optimal coefficients.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import least_squares, minimize

from . import closed_form
from .closed_form import CoeffFamily
from .errors import ConvergenceError, DomainError, PoleError, RankError
from .potentials import LOG, QuantumNumbers

GRID = 3
DEFAULT_FIT_GRID = tuple(x / 4 for x in range(-6, 17))  # -1.5, -1.25, ..., 4
MEASURES = ("absolute", "relative")


def _is_log(lam):
    return lam == LOG or lam == 0


def _grid(reference, lam, n_max, ell_max):
    if isinstance(reference, dict):
        missing = [(n, l) for n in range(n_max + 1) for l in range(ell_max + 1) if (n, l) not in reference]
        if missing:
            raise DomainError(f"reference lacks entries for lam={lam}: {missing}")
        return reference
    return reference.grid(LOG if _is_log(lam) else lam, n_max, ell_max)


def _sum(pairs, measure):
    if measure == "absolute":
        return float(sum((num - app) ** 2 for num, app in pairs))
    if measure == "relative":
        return float(sum(((num - app) / num) ** 2 for num, app in pairs))
    raise DomainError(f"unknown measure {measure!r}; expected one of {MEASURES}")


def chi_measure(lam, b, c, reference, n_max=GRID, ell_max=GRID, measure="absolute") -> float:
    """Sum over the (n, l) grid of (eps_num - eps_A(b, c))^2.

    ``reference`` is a :class:`~auxspec.numeric_solver.ReferenceTable` or a
    mapping ``(n, l) -> eps`` for this exponent.  ``lam`` equal to 0 or LOG
    selects the logarithmic form.
    """
    grid = _grid(reference, lam, n_max, ell_max)
    lam_f = 0.0 if _is_log(lam) else float(lam)
    pairs = [
        (grid[(n, l)], closed_form.improved_epsilon_bc(lam_f, n, l, b, c))
        for n in range(n_max + 1)
        for l in range(ell_max + 1)
    ]
    return _sum(pairs, measure)


def chi_family(lam, family, reference, **kwargs) -> float:
    lam_f = 0.0 if _is_log(lam) else float(lam)
    b, c = CoeffFamily.parse(family).coefficients(lam_f)
    return chi_measure(lam, b, c, reference, **kwargs)


def chi_wkb(lam, reference, n_max=GRID, ell_max=GRID, measure="absolute") -> float:
    if _is_log(lam):
        raise DomainError("the WKB formula has no lam = 0 (logarithmic) counterpart")
    grid = _grid(reference, lam, n_max, ell_max)
    pairs = [
        (grid[(n, l)], closed_form.wkb_epsilon(lam, QuantumNumbers(n, l)))
        for n in range(n_max + 1)
        for l in range(ell_max + 1)
    ]
    return _sum(pairs, measure)


@dataclass(frozen=True)
class FitResult:
    lam: object
    b_opt: float
    c_opt: float
    chi: float
    iterations: int


def _family_starts(lam):
    lam_f = 0.0 if _is_log(lam) else float(lam)
    starts = []
    for family in CoeffFamily:
        try:
            starts.append((family, family.coefficients(lam_f)))
        except DomainError:
            continue
    return starts


def fit_bc(lam, reference, xatol=1e-8, max_iter=10_000, n_max=GRID, ell_max=GRID, measure="absolute") -> FitResult:
    """(b, c) minimizing chi at ``lam`` by Nelder-Mead started from every family.

    The best of the runs is returned.  A run that hits ``max_iter`` before
    its simplex shrinks below ``xatol`` is discarded; if every run does,
    :class:`ConvergenceError` carries the best point found.
    """
    grid = _grid(reference, lam, n_max, ell_max)

    def objective(p):
        try:
            return chi_measure(lam, p[0], p[1], grid, n_max, ell_max, measure)
        except DomainError:
            return math.inf

    best, best_failed, total = None, None, 0
    for _family, start in _family_starts(lam):
        res = minimize(
            objective,
            np.array(start, dtype=float),
            method="Nelder-Mead",
            options={"xatol": xatol, "fatol": math.inf, "maxiter": max_iter, "maxfev": 4 * max_iter},
        )
        total += res.nit
        if not res.success:
            if best_failed is None or res.fun < best_failed.fun:
                best_failed = res
            continue
        if best is None or res.fun < best.fun:
            best = res
    if best is None:
        raise ConvergenceError(
            f"fit_bc at lam={lam} did not converge in {max_iter} iterations",
            best=tuple(best_failed.x),
            uncertainty=best_failed.fun,
        )
    b, c = (float(x) for x in best.x)
    return FitResult(lam, b, c, chi_measure(lam, b, c, grid, n_max, ell_max, measure), total)


def fit_grid(lambdas: Sequence, reference, **kwargs) -> list:
    return [fit_bc(lam, reference, **kwargs) for lam in lambdas]


@dataclass(frozen=True)
class RationalFit:
    """value(lam) = (p1 lam + p2) / (p3 lam + p4) on ``interval``."""

    p_num: tuple
    p_den: tuple
    interval: tuple = (-math.inf, math.inf)
    residual: float = 0.0

    def __post_init__(self):
        p3, p4 = self.p_den
        lo, hi = self.interval
        if p3 == 0:
            if p4 == 0:
                raise PoleError("denominator vanishes identically")
            return
        pole = -p4 / p3
        if lo <= pole <= hi:
            raise PoleError(f"denominator vanishes at lam = {pole:g} inside [{lo:g}, {hi:g}]")

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float)
        p1, p2 = self.p_num
        p3, p4 = self.p_den
        return (p1 * lam + p2) / (p3 * lam + p4)

    def normalized(self, p4=1.0):
        """Same curve with the denominator intercept scaled to ``p4``."""
        s = p4 / self.p_den[1]
        return tuple(s * x for x in (*self.p_num, *self.p_den))


def _residuals(params, lam, val):
    p1, p2, p3 = params
    return (p1 * lam + p2) / (p3 * lam + 1.0) - val


def fit_hyperbola(points, constraints: Optional[Sequence] = None, interval=None) -> RationalFit:
    """Least-squares fit of (p1 lam + p2)/(p3 lam + 1) to ``points``.

    The denominator intercept is fixed to 1, which removes the scale
    freedom of the rational form.  ``constraints`` is an optional list of
    (lam, value) pairs the curve must pass through exactly; each removes one
    parameter by elimination.  The linearized problem
    ``p1 lam + p2 - p3 lam v = v`` supplies the start for a nonlinear
    refinement of the true residuals.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    cons = np.asarray(constraints or [], dtype=float).reshape(-1, 2)
    n_free = 3 - len(cons)
    if n_free < 0:
        raise DomainError("at most three constraints determine a hyperbola")
    if len(pts) < max(n_free, 1) or (not len(cons) and len(pts) < 4):
        raise DomainError(f"need at least {4 if not len(cons) else n_free} points, got {len(pts)}")
    if len(np.unique(pts[:, 0])) != len(pts) or len(np.unique(cons[:, 0])) != len(cons):
        raise DomainError("lam values must be distinct")
    lam, val = pts[:, 0], pts[:, 1]
    if interval is None:
        allx = np.concatenate([lam, cons[:, 0]])
        interval = (float(allx.min()), float(allx.max()))

    # Each row (constraint or data) is linear in p = (p1, p2, p3):  [lam, 1, -lam v] . p = v
    def rows(x, v):
        return np.column_stack([x, np.ones_like(x), -x * v]), v

    a_c, y_c = rows(cons[:, 0], cons[:, 1])
    a_d, y_d = rows(lam, val)
    if len(cons):
        # p = p_part + null @ z, with a_c p = y_c
        p_part = np.linalg.lstsq(a_c, y_c, rcond=None)[0]
        _, sv, vt = np.linalg.svd(a_c)
        if np.sum(sv > 1e-12 * sv.max()) < len(cons):
            raise RankError("constraints are degenerate")
        null = vt[len(cons):].T
    else:
        p_part, null = np.zeros(3), np.eye(3)

    design = a_d @ null
    if np.linalg.matrix_rank(design, tol=1e-10 * max(1.0, np.abs(design).max())) < n_free:
        raise RankError("degenerate data: the rational fit is not determined")
    z0 = np.linalg.lstsq(design, y_d - a_d @ p_part, rcond=None)[0]

    def resid(z):
        return _residuals(p_part + null @ z, lam, val)

    if n_free and len(pts) > n_free:
        z = least_squares(resid, z0, xtol=1e-15, ftol=1e-15, gtol=1e-15, method="lm").x
    else:
        z = z0
    p1, p2, p3 = p_part + null @ z
    rms = float(np.sqrt(np.mean(_residuals((p1, p2, p3), lam, val) ** 2)))
    return RationalFit((float(p1), float(p2)), (float(p3), 1.0), interval, rms)


def coefficient_curves(fits: Sequence[FitResult]):
    """Plot columns for b and c: lam, optimal, bc2, bc3, bc4."""
    b_rows, c_rows = [], []
    for fit in fits:
        lam_f = 0.0 if _is_log(fit.lam) else float(fit.lam)
        fam = [CoeffFamily.parse(k).coefficients(lam_f) for k in ("bc2", "bc3", "bc4")]
        b_rows.append((lam_f, fit.b_opt, *(f[0] for f in fam)))
        c_rows.append((lam_f, fit.c_opt, *(f[1] for f in fam)))
    return np.array(b_rows), np.array(c_rows)
