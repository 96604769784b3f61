"""Lie-Trotter product formulae, the holomorphic-curve limit, and rate reports.

The three product formulae approximate exp(a+b), exp(2a+b), and exp(a+b+c)
by n-th Jordan powers of exponential products; ``general_trotter`` handles
the curve form f(lambda_n)^(mu_n) -> exp(lambda * f'(0)).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

from .algebra import (Element, U_operator, U_pair_operator, jordan_mul,
                      jordan_power)
from .calculus import HolomorphicCurve, derivative_at_zero, exp, power_mu
from .errors import BranchCut, InsufficientData, UnsupportedAlgebra

ERROR_FLOOR = 1e-12

FORMULA_IDS = ("jordan_product", "U_single", "U_pair", "general",
               "associative_identity")


@dataclass(frozen=True)
class ConvergenceReport:
    """Per-n errors of a Trotter experiment with a fitted log-log slope.

    ``fitted_slope`` is None when every error sits at the noise floor,
    i.e. the formula converged exactly on this input.
    """

    formula_id: str
    n_grid: tuple
    errors: tuple
    fitted_slope: float | None
    target_norm: float
    skipped: tuple = ()

    @property
    def exact(self) -> bool:
        return self.fitted_slope is None


@dataclass(frozen=True)
class SequencePlan:
    """Sequences (lambda_n), (mu_n) with lambda_n * mu_n -> limit_lambda."""

    lambda_seq: Callable[[int], complex]
    mu_seq: Callable[[int], complex]
    limit_lambda: complex

    def check_on_grid(self, n_grid: Sequence[int], tol: float = 1e-9):
        first = self.lambda_seq(n_grid[0]) * self.mu_seq(n_grid[0])
        last = self.lambda_seq(n_grid[-1]) * self.mu_seq(n_grid[-1])
        if abs(last - self.limit_lambda) > abs(first - self.limit_lambda) + tol:
            raise ValueError(
                "lambda_n * mu_n does not approach limit_lambda on this grid"
            )


def trotter_jordan(a: Element, b: Element, n: int) -> Element:
    """(e^{a/n} o e^{b/n})^n, converging to e^{a+b}."""
    return jordan_power(jordan_mul(exp(a / n), exp(b / n)), n)


def trotter_U(a: Element, b: Element, n: int) -> Element:
    """(U_{e^{a/n}}(e^{b/n}))^n, converging to e^{2a+b}."""
    return jordan_power(U_operator(exp(a / n)).apply(exp(b / n)), n)


def trotter_U_pair(a: Element, b: Element, c: Element, n: int) -> Element:
    """(U_{e^{a/n}, e^{c/n}}(e^{b/n}))^n, converging to e^{a+b+c}."""
    base = U_pair_operator(exp(a / n), exp(c / n)).apply(exp(b / n))
    return jordan_power(base, n)


def _fit_slope(n_grid, errors):
    """Least-squares slope of log error vs log n above the noise floor."""
    xs, ys = [], []
    for n, e in zip(n_grid, errors):
        if e > ERROR_FLOOR:
            xs.append(np.log(float(n)))
            ys.append(np.log(e))
    if len(xs) < 2:
        return None
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


def general_trotter(f: HolomorphicCurve, plan: SequencePlan,
                    n_grid: Sequence[int]) -> ConvergenceReport:
    """Evaluate f(lambda_n)^(mu_n) along the grid against exp(lambda f'(0)).

    Grid points where the principal-log precondition fails are skipped and
    recorded; the limit statement only holds for sufficiently large n.
    """
    n_grid = tuple(int(n) for n in n_grid)
    plan.check_on_grid(n_grid)
    f0 = f.eval(0.0)
    one = f0.algebra.one()
    if (f0 - one).norm > 1e-12:
        raise ValueError("curve must satisfy f(0) = 1")
    deriv = derivative_at_zero(f, rho=0.5 * f.radius_r)
    target = exp(deriv * plan.limit_lambda)
    tnorm = target.norm

    used, errors, skipped = [], [], []
    for n in n_grid:
        lam = plan.lambda_seq(n)
        mu = plan.mu_seq(n)
        try:
            approx = power_mu(f.eval(lam), mu)
        except BranchCut:
            skipped.append(n)
            continue
        used.append(n)
        errors.append((approx - target).norm)
    if len(used) < 4:
        raise InsufficientData(
            f"only {len(used)} usable grid points after skipping {skipped}"
        )
    return ConvergenceReport(
        formula_id="general",
        n_grid=tuple(used),
        errors=tuple(errors),
        fitted_slope=_fit_slope(used, errors),
        target_norm=tnorm,
        skipped=tuple(skipped),
    )


def _matrix_of(x: Element) -> np.ndarray:
    label = x.algebra.label
    if not label.startswith("matrix:"):
        raise UnsupportedAlgebra(
            f"associative identity requires a matrix algebra, got {label!r}"
        )
    n = int(label.split(":")[1])
    return x.coeffs.reshape(n, n)


def associative_identity_check(a: Element, b: Element, n: int) -> float:
    """Relative residual of the exact associative rearrangement identity.

    Both sides of (e^{a/n} e^{b/n} e^{a/n})^n =
    e^{-a/n} (e^{2a/n} e^{b/n})^n e^{a/n} are evaluated with ordinary
    matrix products; the identity is algebraic, so the residual is
    rounding-level for every n.
    """
    am = _matrix_of(a)
    bm = _matrix_of(b)
    ean = scipy.linalg.expm(am / n)
    ebn = scipy.linalg.expm(bm / n)
    lhs = np.linalg.matrix_power(ean @ ebn @ ean, n)
    rhs = (scipy.linalg.expm(-am / n)
           @ np.linalg.matrix_power(scipy.linalg.expm(2.0 * am / n) @ ebn, n)
           @ ean)
    denom = max(np.linalg.norm(lhs), 1e-300)
    return float(np.linalg.norm(lhs - rhs) / denom)


def geometric_grid(n_min: int = 16, n_max: int = 4096, ratio: int = 2):
    """The default grid {n_min, n_min*ratio, ..., <= n_max}."""
    if n_min < 2 or ratio < 2 or n_max < n_min:
        raise ValueError("grid requires min >= 2, ratio >= 2, max >= min")
    grid = []
    n = n_min
    while n <= n_max:
        grid.append(n)
        n *= ratio
    return tuple(grid)


def convergence_report(formula_id: str, params: dict,
                       n_grid: Sequence[int],
                       workers: int = 1) -> ConvergenceReport:
    """Errors of one product formula against its analytic exp target.

    ``params`` holds the elements: keys "a", "b" and, for U_pair, "c".
    Grid points are independent; ``workers`` > 1 evaluates them in a thread
    pool, with the output order fixed by the grid regardless of completion.
    """
    n_grid = tuple(int(n) for n in n_grid)
    if len(n_grid) < 6:
        raise ValueError("need a geometric grid with at least 6 points")
    for lo, hi in zip(n_grid, n_grid[1:]):
        if hi < 2 * lo:
            raise ValueError("grid must be geometric with ratio >= 2")
    a, b = params["a"], params["b"]
    if formula_id == "jordan_product":
        target = exp(a + b)
        evaluate = lambda n: trotter_jordan(a, b, n)
    elif formula_id == "U_single":
        target = exp(2.0 * a + b)
        evaluate = lambda n: trotter_U(a, b, n)
    elif formula_id == "U_pair":
        c = params["c"]
        target = exp(a + b + c)
        evaluate = lambda n: trotter_U_pair(a, b, c, n)
    else:
        raise ValueError(f"unknown formula id {formula_id!r}")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            approx = list(pool.map(evaluate, n_grid))
    else:
        approx = [evaluate(n) for n in n_grid]
    errors = tuple((x - target).norm for x in approx)
    return ConvergenceReport(
        formula_id=formula_id,
        n_grid=n_grid,
        errors=errors,
        fitted_slope=_fit_slope(n_grid, errors),
        target_norm=target.norm,
    )
