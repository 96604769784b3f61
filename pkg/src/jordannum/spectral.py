"""Jordan invertibility, inverses, and the spectrum via a quadratic pencil.

An element a is invertible iff U_a is bijective, with a^{-1} = U_a^{-1}(a).
Since U_{a - z*1} = U_a - 2z L_a + z^2 I, the spectrum is the root set of
det(U_a - 2z L_a + z^2 I), obtained from the eigenvalues of the 2d x 2d
companion linearization [[0, I], [-U_a, 2 L_a]].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Element, U_operator, mult_operator
from .errors import NotInvertible, OnSpectrum

DEFAULT_COND_TOL = 1e-10


@dataclass(frozen=True)
class SpectrumSet:
    """Deduplicated spectrum points with the tolerance used to merge them."""

    points: tuple
    dedupe_tol: float
    spectral_radius: float

    def distance(self, z: complex) -> float:
        """Distance from z to the nearest spectrum point."""
        return min(abs(z - p) for p in self.points)


def is_invertible(a: Element, cond_tol: float = DEFAULT_COND_TOL) -> bool:
    """True iff the smallest singular value of U_a clears cond_tol relatively."""
    s = np.linalg.svd(U_operator(a).entries, compute_uv=False)
    return bool(s[-1] > cond_tol * s[0])


def inverse(a: Element, cond_tol: float = DEFAULT_COND_TOL) -> Element:
    """Jordan inverse b = U_a^{-1}(a), solved as a linear system."""
    ua = U_operator(a).entries
    s = np.linalg.svd(ua, compute_uv=False)
    if s[-1] <= cond_tol * s[0]:
        raise NotInvertible(
            f"U_a is numerically singular (smallest singular value {s[-1]:.3e})",
            smallest_singular_value=float(s[-1]),
        )
    return Element(a.algebra, np.linalg.solve(ua, a.coeffs))


def _dedupe(points: np.ndarray, tol: float):
    """Greedy merge of close eigenvalues; cluster means kept pairwise > tol."""
    clusters = []  # (sum, count)
    for z in sorted(points, key=lambda w: (-abs(w), w.real, w.imag)):
        placed = False
        for idx, (tot, cnt) in enumerate(clusters):
            if abs(z - tot / cnt) <= tol:
                clusters[idx] = (tot + z, cnt + 1)
                placed = True
                break
        if not placed:
            clusters.append((z, 1))
    means = [tot / cnt for tot, cnt in clusters]
    # merge any cluster means that ended up within tol of each other
    merged = True
    while merged:
        merged = False
        for i in range(len(means)):
            for j in range(i + 1, len(means)):
                if abs(means[i] - means[j]) <= tol:
                    means[i] = 0.5 * (means[i] + means[j])
                    del means[j]
                    merged = True
                    break
            if merged:
                break
    return means


def jordan_spectrum(a: Element, dedupe_tol: float | None = None) -> SpectrumSet:
    """Spectrum of a from the companion linearization of the U pencil."""
    d = a.algebra.dim
    ua = U_operator(a).entries
    la = mult_operator(a).entries
    comp = np.zeros((2 * d, 2 * d), dtype=complex)
    comp[:d, d:] = np.eye(d)
    comp[d:, :d] = -ua
    comp[d:, d:] = 2.0 * la
    try:
        raw = np.linalg.eigvals(comp)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NotInvertible(f"eigenvalue solver failed: {exc}") from exc
    raw_radius = float(np.max(np.abs(raw))) if raw.size else 0.0
    tol = dedupe_tol if dedupe_tol is not None else 1e-6 * (1.0 + raw_radius)
    points = tuple(_dedupe(raw, tol))
    radius = float(max(abs(p) for p in points))
    return SpectrumSet(points=points, dedupe_tol=tol, spectral_radius=radius)


def resolvent(a: Element, zeta: complex,
              cond_tol: float = DEFAULT_COND_TOL) -> Element:
    """(zeta*1 - a)^{-1}; raises NotInvertible when zeta is on the spectrum."""
    shifted = a.algebra.one() * zeta - a
    return inverse(shifted, cond_tol=cond_tol)


def _segment_distance(p: complex, a: complex, b: complex) -> float:
    """Distance from point p to the segment [a, b] in the plane."""
    ab = b - a
    denom = abs(ab) ** 2
    if denom == 0.0:
        return abs(p - a)
    t = ((p - a).real * ab.real + (p - a).imag * ab.imag) / denom
    t = min(1.0, max(0.0, t))
    return abs(p - (a + t * ab))


def in_unbounded_component(s: SpectrumSet, lam: complex) -> bool:
    """Certificate that lam lies in the unbounded spectral complement component.

    Returns True when certified; False means "not certified", not "inside".
    """
    if s.distance(lam) <= s.dedupe_tol:
        raise OnSpectrum(f"{lam} lies on the spectrum")
    if abs(lam) > s.spectral_radius:
        return True
    centroid = sum(s.points) / len(s.points)
    direction = lam - centroid
    if direction == 0:
        return False
    direction /= abs(direction)
    # walk the straight ray out to radius 2R and require clearance > tol
    target_radius = 2.0 * s.spectral_radius
    t_hi = target_radius + abs(lam - centroid)
    end = lam + t_hi * direction
    clearance = min(_segment_distance(p, lam, end) for p in s.points)
    return bool(clearance > s.dedupe_tol)


def u_inverse_residual(x: Element, y: Element) -> float:
    """Relative residual of (U_x(y))^{-1} = U_x^{-1}(y^{-1})."""
    uxy = U_operator(x).apply(y)
    lhs = inverse(uxy)
    ux = U_operator(x).entries
    rhs = Element(x.algebra, np.linalg.solve(ux, inverse(y).coeffs))
    return (lhs - rhs).norm / max(lhs.norm, 1e-300)
