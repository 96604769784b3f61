"""Exponential, principal logarithm, powers, and contour functional calculus.

All single-element functions operate inside the closed subalgebra generated
by the element, which is associative and commutative, so scalar algorithms
(scaling-and-squaring, Newton square roots, series) carry over verbatim.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import Element, jordan_mul
from .errors import BranchCut, ContourViolation, JordanNumError, QuadratureError
from .spectral import inverse, jordan_spectrum, resolvent

_SERIES_TOL = 1e-18
_BRANCH_CLEARANCE = 1e-8
_MAX_CONTOUR_NODES = 8192


@dataclass(frozen=True)
class Contour:
    """A circle |zeta - center| = radius discretized with ``nodes`` points."""

    center: complex
    radius: float
    nodes: int = 256

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("contour radius must be positive")
        if self.nodes < 32 or self.nodes % 2:
            raise ValueError("contour node count must be even and >= 32")


@dataclass(frozen=True)
class HolomorphicCurve:
    """A caller-supplied analytic map from a disk of radius ``radius_r``.

    ``eval`` must be safe to call concurrently.
    """

    eval: Callable[[complex], Element]
    radius_r: float


def exp(a: Element) -> Element:
    """Exponential by scaling-and-squaring with a truncated power series."""
    nrm = a.norm
    s = 0 if nrm <= 0.5 else max(0, math.ceil(math.log2(nrm / 0.5)))
    x = a / float(2 ** s)
    acc = a.algebra.one()
    term = a.algebra.one()
    for k in range(1, 200):
        term = jordan_mul(term, x) / k
        acc = acc + term
        if term.norm < _SERIES_TOL * acc.norm:
            break
    for _ in range(s):
        acc = jordan_mul(acc, acc)
    return acc


def _sqrt_newton(a: Element, max_iter: int = 64) -> Element:
    """Principal square root by Newton iteration inside the subalgebra of a."""
    x = a
    for _ in range(max_iter):
        nxt = 0.5 * (x + jordan_mul(inverse(x), a))
        if (nxt - x).norm <= 1e-15 * max(nxt.norm, 1.0):
            x = nxt
            break
        x = nxt
    else:
        raise JordanNumError("Newton square-root iteration did not converge")
    resid = (jordan_mul(x, x) - a).norm
    if resid > 1e-9 * max(a.norm, 1.0):
        raise JordanNumError(
            f"Newton square root inaccurate (residual {resid:.3e})"
        )
    return x


def log(a: Element) -> Element:
    """Principal logarithm by inverse scaling-and-squaring."""
    spec = jordan_spectrum(a)
    for p in spec.points:
        dist = abs(p) if p.real > 0 else abs(p.imag)
        if dist <= _BRANCH_CLEARANCE:
            raise BranchCut(
                f"spectrum point {p} is within {_BRANCH_CLEARANCE} of the "
                "closed negative real axis"
            )
    one = a.algebra.one()
    cur = a
    roots = 0
    while (cur - one).norm > 0.25:
        cur = _sqrt_newton(cur)
        roots += 1
        if roots > 64:
            raise JordanNumError("square-root staging did not contract to 1")
    z = cur - one
    term = one
    acc = a.algebra.zero()
    for k in range(1, 200):
        term = jordan_mul(term, z)
        acc = acc + term * ((-1.0) ** (k + 1) / k)
        if term.norm / k < _SERIES_TOL * max(acc.norm, 1e-30):
            break
    return acc * float(2 ** roots)


def power_mu(a: Element, mu: complex) -> Element:
    """Principal power a^mu = exp(mu * log a)."""
    return exp(log(a) * mu)


def holomorphic_calculus(h: Callable[[complex], complex], a: Element,
                         contour: Contour) -> Element:
    """Trapezoidal contour quadrature of (1/2 pi i) * integral h(z) R(z) dz."""
    spec = jordan_spectrum(a)
    margin = 0.05 * contour.radius
    for p in spec.points:
        if abs(p - contour.center) >= contour.radius - margin:
            raise ContourViolation(
                f"spectrum point {p} is not strictly inside the contour"
            )

    def quad(n):
        theta = 2.0 * np.pi * np.arange(n) / n
        offs = contour.radius * np.exp(1j * theta)
        acc = np.zeros(a.algebra.dim, dtype=complex)
        for off in offs:
            zeta = contour.center + off
            acc += h(zeta) * off * resolvent(a, zeta).coeffs
        return Element(a.algebra, acc / n)

    n = contour.nodes
    prev = quad(n)
    while n < _MAX_CONTOUR_NODES:
        n *= 2
        cur = quad(n)
        if (cur - prev).norm <= 1e-9 * max(cur.norm, 1.0):
            return cur
        prev = cur
    raise QuadratureError(
        f"contour quadrature did not stabilize below {_MAX_CONTOUR_NODES} nodes"
    )


def derivative_at_zero(f: HolomorphicCurve, rho: float, nodes: int = 64) -> Element:
    """f'(0) by the Cauchy coefficient formula on the circle of radius rho."""
    if rho <= 0 or rho >= f.radius_r:
        raise ValueError("sampling radius must lie in (0, radius_r)")
    if nodes < 32:
        raise ValueError("need at least 32 quadrature nodes")

    def quad(n):
        omega = np.exp(2j * np.pi / n)
        acc = None
        for j in range(n):
            val = f.eval(rho * omega ** j) * (omega ** (-j) / (rho * n))
            acc = val if acc is None else acc + val
        return acc

    n = nodes
    prev = quad(n)
    while n < _MAX_CONTOUR_NODES:
        n *= 2
        cur = quad(n)
        if (cur - prev).norm <= 1e-9 * max(cur.norm, 1.0):
            return cur
        prev = cur
    raise QuadratureError(
        f"Cauchy quadrature did not stabilize below {_MAX_CONTOUR_NODES} nodes"
    )


def cos(a: Element) -> Element:
    """Cosine via the exponential: (e^{ia} + e^{-ia}) / 2."""
    return 0.5 * (exp(a * 1j) + exp(a * (-1j)))
