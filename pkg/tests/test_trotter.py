import numpy as np
import pytest
import scipy.linalg

from jordannum import (
    HolomorphicCurve,
    SequencePlan,
    U_operator,
    U_pair_operator,
    associative_identity_check,
    convergence_report,
    cos,
    exp,
    from_descriptor,
    general_trotter,
    geometric_grid,
    jordan_mul,
    jordan_power,
    random_element,
    trotter_U,
    trotter_U_pair,
    trotter_jordan,
)
from jordannum.errors import InsufficientData, UnsupportedAlgebra

FAMILIES = ["matrix:2", "matrix:3", "spin:4", "fn:5", "sum:fn:2+matrix:2"]


class TestProductFormulae:
    def test_zero_inputs(self):
        a = from_descriptor("spin:3")
        z = a.zero()
        for n in (1, 7, 64):
            assert (trotter_jordan(z, z, n) - a.one()).norm < 1e-12

    def test_equal_inputs_exact(self):
        a = from_descriptor("matrix:2")
        rng = np.random.default_rng(131)
        x = random_element(a, rng)
        target = exp(2.0 * x)
        for n in (1, 8, 64):
            got = trotter_jordan(x, x, n)
            assert (got - target).norm <= 1e-10 * target.norm

    def test_pauli_large_n(self):
        a = from_descriptor("matrix:2")
        sx = a.element([0, 1, 1, 0])
        sz = a.element([1, 0, 0, -1])
        target = exp(sx + sz)
        assert (trotter_jordan(sx, sz, 4096) - target).norm <= 5e-3

    def test_U_a_zero_reduces_exactly(self):
        a = from_descriptor("matrix:2")
        rng = np.random.default_rng(137)
        b = random_element(a, rng)
        target = exp(b)
        for n in (4, 64):
            assert (trotter_U(a.zero(), b, n) - target).norm <= \
                1e-9 * target.norm

    def test_U_commutative_exact(self):
        f = from_descriptor("fn:5")
        rng = np.random.default_rng(139)
        x = random_element(f, rng)
        target = exp(2.0 * x)
        for n in (2, 16):
            assert (trotter_U(x, f.zero(), n) - target).norm <= \
                1e-10 * target.norm

    def test_U_pauli_large_n(self):
        a = from_descriptor("matrix:2")
        sx = a.element([0, 1, 1, 0])
        sz = a.element([1, 0, 0, -1])
        target = exp(2.0 * sx + sz)
        assert (trotter_U(sx, sz, 4096) - target).norm <= 5e-3

    def test_U_matches_associative_sandwich(self):
        # in matrix algebras U_{e^{a/n}}(x) = e^{a/n} x e^{a/n}
        a = from_descriptor("matrix:3")
        rng = np.random.default_rng(149)
        x = random_element(a, rng)
        y = random_element(a, rng)
        n = 16
        xm = x.coeffs.reshape(3, 3)
        ym = y.coeffs.reshape(3, 3)
        ean = scipy.linalg.expm(xm / n)
        ebn = scipy.linalg.expm(ym / n)
        oracle = np.linalg.matrix_power(ean @ ebn @ ean, n)
        got = trotter_U(x, y, n).coeffs.reshape(3, 3)
        assert np.linalg.norm(got - oracle) <= \
            1e-9 * max(np.linalg.norm(oracle), 1.0)

    def test_U_pair_reduces_to_U_bitwise(self):
        a = from_descriptor("spin:4")
        rng = np.random.default_rng(151)
        x, y = random_element(a, rng), random_element(a, rng)
        for n in (3, 32):
            assert np.array_equal(trotter_U_pair(x, y, x, n).coeffs,
                                  trotter_U(x, y, n).coeffs)

    def test_U_pair_c_zero_targets_sum(self):
        a = from_descriptor("matrix:2")
        rng = np.random.default_rng(157)
        x, y = random_element(a, rng), random_element(a, rng)
        target = exp(x + y)
        assert (trotter_U_pair(x, y, a.zero(), 4096) - target).norm <= 1e-2

    def test_U_pair_spin_large_n(self):
        s = from_descriptor("spin:3")
        rng = np.random.default_rng(163)
        x, y, z = (random_element(s, rng) for _ in range(3))
        target = exp(x + y + z)
        assert (trotter_U_pair(x, y, z, 4096) - target).norm <= 1e-2


class TestAssociativeIdentity:
    def test_b_zero(self):
        a = from_descriptor("matrix:2")
        rng = np.random.default_rng(167)
        x = random_element(a, rng)
        assert associative_identity_check(x, a.zero(), 8) <= 1e-12

    def test_commuting(self):
        a = from_descriptor("matrix:2")
        rng = np.random.default_rng(173)
        x = random_element(a, rng)
        assert associative_identity_check(x, 2.0 * x, 16) <= 1e-12

    def test_random_3x3(self):
        a = from_descriptor("matrix:3")
        rng = np.random.default_rng(179)
        x, y = random_element(a, rng), random_element(a, rng)
        assert associative_identity_check(x, y, 64) <= 1e-10

    def test_every_grid_n(self):
        a = from_descriptor("matrix:2")
        rng = np.random.default_rng(181)
        x, y = random_element(a, rng), random_element(a, rng)
        for n in geometric_grid():
            assert associative_identity_check(x, y, n) <= 1e-10

    def test_non_matrix_rejected(self):
        s = from_descriptor("spin:3")
        with pytest.raises(UnsupportedAlgebra):
            associative_identity_check(s.one(), s.one(), 4)


class TestConvergenceReport:
    def test_commuting_inputs_exact(self):
        f = from_descriptor("fn:5")
        rng = np.random.default_rng(191)
        a, b = random_element(f, rng), random_element(f, rng)
        rep = convergence_report("jordan_product", {"a": a, "b": b},
                                 geometric_grid())
        assert rep.exact
        assert rep.fitted_slope is None
        # rounding from the 4096-fold powering sits just above 1e-12
        assert all(e <= 1e-11 for e in rep.errors)

    def test_pauli_slope_second_order(self):
        # the Jordan product symmetrizes the splitting, so the observed
        # rate is O(1/n^2); freeze the empirically fitted slope
        a = from_descriptor("matrix:2")
        sx = a.element([0, 1, 1, 0])
        sz = a.element([1, 0, 0, -1])
        rep = convergence_report("jordan_product", {"a": sx, "b": sz},
                                 geometric_grid())
        assert rep.fitted_slope == pytest.approx(-2.0, abs=0.15)

    def test_monotone_decrease(self):
        for desc in FAMILIES:
            alg = from_descriptor(desc)
            rng = np.random.default_rng(193)
            a, b = random_element(alg, rng), random_element(alg, rng)
            rep = convergence_report("jordan_product", {"a": a, "b": b},
                                     geometric_grid())
            above = [e for e in rep.errors if e > 1e-12]
            assert all(x > y for x, y in zip(above, above[1:]))

    def test_error_contraction_over_grid(self):
        a = from_descriptor("matrix:2")
        rng = np.random.default_rng(197)
        x, y = random_element(a, rng), random_element(a, rng)
        rep = convergence_report("U_single", {"a": x, "b": y},
                                 geometric_grid(16, 4096, 2))
        # n ratio 256 between ends; second-order decay gives far more
        # than the 100x contraction expected from slope near -1
        assert rep.errors[-1] < rep.errors[0] / 100

    def test_grid_validation(self):
        a = from_descriptor("fn:5")
        one = a.one()
        with pytest.raises(ValueError):
            convergence_report("jordan_product", {"a": one, "b": one},
                               [16, 32, 64, 128])
        with pytest.raises(ValueError):
            convergence_report("bogus", {"a": one, "b": one},
                               geometric_grid())

    def test_workers_match_sequential(self):
        a = from_descriptor("matrix:2")
        rng = np.random.default_rng(199)
        x, y = random_element(a, rng), random_element(a, rng)
        seq = convergence_report("jordan_product", {"a": x, "b": y},
                                 geometric_grid(16, 512, 2))
        par = convergence_report("jordan_product", {"a": x, "b": y},
                                 geometric_grid(16, 512, 2), workers=4)
        assert seq.errors == par.errors


class TestGeneralTrotter:
    def test_exponential_curve_exact(self):
        a = from_descriptor("matrix:2")
        rng = np.random.default_rng(211)
        x = random_element(a, rng)
        f = HolomorphicCurve(lambda z: exp(x * z), radius_r=2.0)
        plan = SequencePlan(lambda n: 1.0 / n, lambda n: float(n), 1.0)
        rep = general_trotter(f, plan, geometric_grid())
        assert all(e <= 1e-8 for e in rep.errors)

    def test_remark_curve(self):
        a = from_descriptor("matrix:2")
        rng = np.random.default_rng(223)
        xa, xb, xc, xd = (random_element(a, rng) for _ in range(4))
        d3 = jordan_power(xd, 3)
        one = a.one()

        def curve(z):
            z = complex(z)
            poly = one + xb * z + d3 * z ** 3
            return jordan_mul(jordan_mul(exp(xa * z), poly), cos(xc * z))

        f = HolomorphicCurve(curve, radius_r=1.0)
        plan = SequencePlan(lambda n: 1.0 / n, lambda n: float(n), 1.0)
        rep = general_trotter(f, plan, geometric_grid())
        target = exp(xa + xb)
        assert abs(rep.target_norm - target.norm) <= 1e-8
        assert rep.errors[-1] <= 2e-2

    def test_rescaled_plan(self):
        a = from_descriptor("spin:3")
        rng = np.random.default_rng(227)
        x = random_element(a, rng)
        f = HolomorphicCurve(lambda z: exp(x * z), radius_r=2.0)
        plan = SequencePlan(lambda n: 1.0 / n ** 2, lambda n: 3.0 * n ** 2,
                            3.0)
        rep = general_trotter(f, plan, geometric_grid())
        target = exp(3.0 * x)
        assert abs(rep.target_norm - target.norm) <= 1e-8
        # mu_n ~ 3n^2 multiplies log-rounding by ~5e7 at n=4096
        assert rep.errors[-1] <= 1e-7

    def test_matches_product_formulae(self):
        a = from_descriptor("matrix:2")
        rng = np.random.default_rng(229)
        xa, xb, xc = (random_element(a, rng) for _ in range(3))
        plan = SequencePlan(lambda n: 1.0 / n, lambda n: float(n), 1.0)
        n = 256

        curves = {
            "jordan_product": (
                lambda z: jordan_mul(exp(xa * z), exp(xb * z)),
                trotter_jordan(xa, xb, n),
            ),
            "U_single": (
                lambda z: U_operator(exp(xa * z)).apply(exp(xb * z)),
                trotter_U(xa, xb, n),
            ),
            "U_pair": (
                lambda z: U_pair_operator(exp(xa * z),
                                          exp(xc * z)).apply(exp(xb * z)),
                trotter_U_pair(xa, xb, xc, n),
            ),
        }
        from jordannum import power_mu
        for name, (curve, direct) in curves.items():
            via_curve = power_mu(curve(1.0 / n), float(n))
            assert (via_curve - direct).norm <= 1e-7 * max(direct.norm, 1.0), \
                name

    def test_requires_unit_at_zero(self):
        a = from_descriptor("fn:5")
        f = HolomorphicCurve(lambda z: a.one() * 2.0, radius_r=1.0)
        plan = SequencePlan(lambda n: 1.0 / n, lambda n: float(n), 1.0)
        with pytest.raises(ValueError):
            general_trotter(f, plan, geometric_grid())

    def test_insufficient_data(self):
        # curve hits the branch cut at every grid point: f(lambda) has a
        # negative real spectrum point
        f_alg = from_descriptor("fn:2")
        one = f_alg.one()

        def curve(z):
            z = complex(z)
            if z == 0:
                return one
            return f_alg.element([-1.0, 1.0])

        f = HolomorphicCurve(curve, radius_r=1.0)
        plan = SequencePlan(lambda n: 1.0 / n, lambda n: float(n), 1.0)
        with pytest.raises(InsufficientData):
            general_trotter(f, plan, geometric_grid())
