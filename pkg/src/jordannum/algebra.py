"""Finite-dimensional complex Jordan algebras given by structure constants.

An algebra is a dense rank-3 tensor c with (e_i o e_j) = sum_k c[i,j,k] e_k,
a unit vector, and a descriptor label.  Elements are coefficient vectors
against the basis; every family (matrix, spin factor, function algebra,
direct sums) goes through the same generic product path.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import AlgebraMismatch, ParseError, StructureError

_JORDAN_ID_TOL = 1e-12
_UNIT_TOL = 1e-12


@dataclass(frozen=True)
class AlgebraSpec:
    """A complex Jordan algebra of dimension ``dim`` with explicit basis."""

    dim: int
    structure: np.ndarray  # shape (d, d, d), c[i, j, k]
    unit: np.ndarray       # shape (d,)
    label: str

    def __post_init__(self):
        d = self.dim
        if d < 1:
            raise StructureError("algebra dimension must be positive")
        c = np.ascontiguousarray(np.asarray(self.structure, dtype=complex))
        u = np.ascontiguousarray(np.asarray(self.unit, dtype=complex))
        if c.shape != (d, d, d):
            raise StructureError(f"structure tensor must be {d}x{d}x{d}")
        if u.shape != (d,):
            raise StructureError(f"unit vector must have length {d}")
        if not np.array_equal(c, c.transpose(1, 0, 2)):
            raise StructureError("structure tensor is not symmetric in (i, j)")
        c.setflags(write=False)
        u.setflags(write=False)
        object.__setattr__(self, "structure", c)
        object.__setattr__(self, "unit", u)
        # L_unit must be the identity operator.
        l_unit = np.einsum("i,ijk->kj", u, c)
        if np.max(np.abs(l_unit - np.eye(d))) > _UNIT_TOL:
            raise StructureError("unit vector does not act as the identity")
        self._check_jordan_identity()

    def _check_jordan_identity(self):
        c = self.structure
        d = self.dim
        for i in range(d):
            ei = np.zeros(d, dtype=complex)
            ei[i] = 1.0
            sq = c[i, i, :]
            l_ei = np.einsum("i,ijk->kj", ei, c)
            l_sq = np.einsum("i,ijk->kj", sq, c)
            # (e_i^2 o b) o e_i - (e_i o b) o e_i^2 for b over all basis vectors
            resid = l_ei @ l_sq - l_sq @ l_ei
            if np.max(np.abs(resid)) > _JORDAN_ID_TOL:
                raise StructureError(
                    f"Jordan identity fails on basis index {i} "
                    f"(residual {np.max(np.abs(resid)):.3e})"
                )

    def element(self, coeffs) -> "Element":
        return Element(self, np.asarray(coeffs, dtype=complex))

    def one(self) -> "Element":
        return Element(self, self.unit)

    def zero(self) -> "Element":
        return Element(self, np.zeros(self.dim, dtype=complex))

    def basis_element(self, i: int) -> "Element":
        coeffs = np.zeros(self.dim, dtype=complex)
        coeffs[i] = 1.0
        return Element(self, coeffs)

    def __eq__(self, other):
        if not isinstance(other, AlgebraSpec):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.label == other.label
            and np.array_equal(self.structure, other.structure)
            and np.array_equal(self.unit, other.unit)
        )

    def __hash__(self):
        return hash((self.dim, self.label))


@dataclass(frozen=True)
class Element:
    """A coefficient vector over the algebra's basis."""

    algebra: AlgebraSpec
    coeffs: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(np.asarray(self.coeffs, dtype=complex))
        if v.shape != (self.algebra.dim,):
            raise StructureError(
                f"coefficient vector must have length {self.algebra.dim}"
            )
        if not np.all(np.isfinite(v.real)) or not np.all(np.isfinite(v.imag)):
            raise StructureError("coefficients must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "coeffs", v)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def __add__(self, other: "Element") -> "Element":
        _same_algebra(self, other)
        return Element(self.algebra, self.coeffs + other.coeffs)

    def __sub__(self, other: "Element") -> "Element":
        _same_algebra(self, other)
        return Element(self.algebra, self.coeffs - other.coeffs)

    def __neg__(self) -> "Element":
        return Element(self.algebra, -self.coeffs)

    def __mul__(self, scalar) -> "Element":
        return Element(self.algebra, self.coeffs * complex(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "Element":
        return Element(self.algebra, self.coeffs / complex(scalar))


@dataclass(frozen=True)
class OperatorMatrix:
    """A d x d complex matrix representing a linear map on the algebra."""

    algebra: AlgebraSpec
    entries: np.ndarray

    def __post_init__(self):
        m = np.ascontiguousarray(np.asarray(self.entries, dtype=complex))
        d = self.algebra.dim
        if m.shape != (d, d):
            raise StructureError(f"operator matrix must be {d}x{d}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    def apply(self, x: Element) -> Element:
        if x.algebra is not self.algebra and x.algebra != self.algebra:
            raise AlgebraMismatch("operator and element algebras differ")
        return Element(self.algebra, self.entries @ x.coeffs)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.algebra, self.entries @ other.entries)


def _same_algebra(a: Element, b: Element):
    if a.algebra is b.algebra:
        return
    if a.algebra != b.algebra:
        raise AlgebraMismatch("elements belong to different algebras")


def jordan_mul(a: Element, b: Element) -> Element:
    """Jordan product a o b through the structure tensor.

    Contracts the symmetrized coefficient outer product so that a o b and
    b o a are the bitwise-identical computation.
    """
    _same_algebra(a, b)
    ar, ai = a.coeffs.real, a.coeffs.imag
    br, bi = b.coeffs.real, b.coeffs.imag
    # real-arithmetic outer product: real multiply/add commute bitwise, so
    # swapping a and b transposes this matrix exactly
    outer = (np.multiply.outer(ar, br) - np.multiply.outer(ai, bi)
             + 1j * (np.multiply.outer(ar, bi) + np.multiply.outer(ai, br)))
    sym = 0.5 * (outer + outer.T)
    out = np.einsum("ij,ijk->k", sym, a.algebra.structure)
    return Element(a.algebra, out)


def mult_operator(a: Element) -> OperatorMatrix:
    """Matrix of the multiplication map L_a : b -> a o b."""
    m = np.einsum("i,ijk->kj", a.coeffs, a.algebra.structure)
    return OperatorMatrix(a.algebra, m)


def U_operator(a: Element) -> OperatorMatrix:
    """Quadratic representation U_a = 2 L_a^2 - L_{a^2}."""
    la = mult_operator(a).entries
    lsq = mult_operator(jordan_mul(a, a)).entries
    return OperatorMatrix(a.algebra, 2.0 * (la @ la) - lsq)


def U_pair_operator(a: Element, c: Element) -> OperatorMatrix:
    """Polarized quadratic map U_{a,c} = L_a L_c + L_c L_a - L_{a o c}."""
    _same_algebra(a, c)
    la = mult_operator(a).entries
    lc = mult_operator(c).entries
    lac = mult_operator(jordan_mul(a, c)).entries
    return OperatorMatrix(a.algebra, la @ lc + lc @ la - lac)


def jordan_power(a: Element, n: int) -> Element:
    """Integer power a^n by binary powering (valid by power associativity)."""
    if n < 0:
        raise ValueError("jordan_power requires a nonnegative exponent")
    result = a.algebra.one()
    base = a
    k = n
    while k:
        if k & 1:
            result = jordan_mul(result, base)
        base = jordan_mul(base, base)
        k >>= 1
    return result


# ---------------------------------------------------------------------------
# Standard families


def _from_basis_products(products, unit, label) -> AlgebraSpec:
    """Assemble an AlgebraSpec from per-basis-pair product coefficients."""
    d = len(unit)
    c = np.zeros((d, d, d), dtype=complex)
    for i in range(d):
        for j in range(i, d):
            c[i, j] = products(i, j)
            c[j, i] = c[i, j]
    return AlgebraSpec(d, c, np.asarray(unit, dtype=complex), label)


def make_matrix_jordan(n: int) -> AlgebraSpec:
    """M_n(C) as a Jordan algebra under the symmetrized product.

    Basis: matrix units E_{pq} flattened row-major, so coefficient index
    i = p*n + q.
    """
    if n < 1:
        raise ValueError("matrix algebra size must be at least 1")
    d = n * n

    def prod(i, j):
        p1, q1 = divmod(i, n)
        p2, q2 = divmod(j, n)
        out = np.zeros(d, dtype=complex)
        if q1 == p2:
            out[p1 * n + q2] += 0.5
        if q2 == p1:
            out[p2 * n + q1] += 0.5
        return out

    unit = np.eye(n, dtype=complex).reshape(d)
    return _from_basis_products(prod, unit, f"matrix:{n}")


def make_spin_factor(k: int) -> AlgebraSpec:
    """Spin factor C1 + C^k with (alpha,u) o (beta,v) = (ab + <u,v>, av + bu).

    The pairing is the bilinear form sum_i u_i v_i (no conjugation).
    """
    if k < 1:
        raise ValueError("spin factor size must be at least 1")
    d = k + 1

    def prod(i, j):
        out = np.zeros(d, dtype=complex)
        if i == 0 and j == 0:
            out[0] = 1.0
        elif i == 0:
            out[j] = 1.0
        elif j == 0:
            out[i] = 1.0
        elif i == j:
            out[0] = 1.0
        return out

    unit = np.zeros(d, dtype=complex)
    unit[0] = 1.0
    return _from_basis_products(prod, unit, f"spin:{k}")


def make_function_algebra(k: int) -> AlgebraSpec:
    """C^k with the pointwise product; unit is the all-ones vector."""
    if k < 1:
        raise ValueError("function algebra size must be at least 1")

    def prod(i, j):
        out = np.zeros(k, dtype=complex)
        if i == j:
            out[i] = 1.0
        return out

    return _from_basis_products(prod, np.ones(k, dtype=complex), f"fn:{k}")


def make_direct_sum(a: AlgebraSpec, b: AlgebraSpec) -> AlgebraSpec:
    """Block-diagonal direct sum of two algebras."""
    da, db = a.dim, b.dim
    d = da + db
    c = np.zeros((d, d, d), dtype=complex)
    c[:da, :da, :da] = a.structure
    c[da:, da:, da:] = b.structure
    unit = np.concatenate([a.unit, b.unit])
    return AlgebraSpec(d, c, unit, f"sum:{a.label}+{b.label}")


# ---------------------------------------------------------------------------
# Descriptor grammar: matrix:<n> | spin:<k> | fn:<k> | sum:<desc>+<desc>


def _parse_size(text, offset):
    if not text or not text.isdigit():
        raise ParseError(f"expected a positive integer, got {text!r}", offset)
    n = int(text)
    if n < 1:
        raise ParseError(f"size must be positive, got {n}", offset)
    return n


@lru_cache(maxsize=128)
def from_descriptor(descriptor: str) -> AlgebraSpec:
    """Construct the algebra named by a descriptor string."""
    return _parse_descriptor(descriptor, 0)


def _parse_descriptor(descriptor: str, base: int) -> AlgebraSpec:
    if descriptor.startswith("matrix:"):
        n = _parse_size(descriptor[7:], base + 7)
        return make_matrix_jordan(n)
    if descriptor.startswith("spin:"):
        n = _parse_size(descriptor[5:], base + 5)
        return make_spin_factor(n)
    if descriptor.startswith("fn:"):
        n = _parse_size(descriptor[3:], base + 3)
        return make_function_algebra(n)
    if descriptor.startswith("sum:"):
        body = descriptor[4:]
        parts = body.split("+")
        if len(parts) < 2:
            raise ParseError("sum needs at least two summands", base + 4)
        offset = base + 4
        algebras = []
        for part in parts:
            algebras.append(_parse_descriptor(part, offset))
            offset += len(part) + 1
        out = algebras[0]
        for nxt in algebras[1:]:
            out = make_direct_sum(out, nxt)
        return out
    raise ParseError(f"unknown algebra family in {descriptor!r}", base)


def random_element(algebra: AlgebraSpec, rng: np.random.Generator,
                   norm_cap: float = 1.0) -> Element:
    """Standard complex Gaussian coefficients scaled to norm <= norm_cap."""
    z = (rng.standard_normal(algebra.dim)
         + 1j * rng.standard_normal(algebra.dim)) / np.sqrt(2.0)
    nrm = np.linalg.norm(z)
    if nrm > norm_cap:
        z = z * (norm_cap / nrm)
    return Element(algebra, z)
