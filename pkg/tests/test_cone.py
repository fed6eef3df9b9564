import json
import math

import numpy as np
import pytest

from coneweyl.cone import (
    ConeFunction,
    HyperboloidPoint,
    LorentzTransform,
    METRIC,
    coulomb_c,
    cone_gradient,
    dsquare,
    gradient_sections,
    integrate_invariant,
    log_F,
    lorentz_generator,
    lorentz_pullback,
    mdot,
    sh_dot,
    solve_F,
)
from coneweyl.errors import DegreeError, NotCoexactError
from coneweyl.grid import grid_for, laplace_eigs

RNG = np.random.default_rng(7)
REST = HyperboloidPoint.rest()


def brute_coulomb_integral(chi, e=1.0, n_u=400):
    # independent 1d oracle: 2 pi int du e/(cosh - sinh u)^2
    x, w = np.polynomial.legendre.leggauss(n_u)
    return 2 * np.pi * float(np.sum(w * e / (math.cosh(chi) - math.sinh(chi) * x) ** 2))


class TestConeFunction:
    def test_constant_coefficients(self):
        f = ConeFunction.constant(2.5, 8)
        assert abs(f.coeff(0, 0) - 2.5 * math.sqrt(4 * math.pi)) < 1e-14
        assert f.real_flag

    def test_real_symmetry_enforced_from_section(self):
        g = grid_for(8)
        f = ConeFunction.from_section(np.cos(g.theta)[:, None] * np.ones(g.n_phi), g, 0)
        assert f.real_flag
        for l in range(1, 4):
            for m in range(1, l + 1):
                lhs = f.coeff(l, -m)
                rhs = (-1) ** m * np.conj(f.coeff(l, m))
                assert abs(lhs - rhs) < 1e-14

    def test_conjugate_is_pointwise_conjugation(self):
        f = ConeFunction(
            0, 6, RNG.normal(size=49) + 1j * RNG.normal(size=49), False
        )
        g = grid_for(6)
        assert np.max(np.abs(f.conjugate().section(g) - np.conj(f.section(g)))) < 1e-12

    def test_json_roundtrip_and_rejection(self):
        f = ConeFunction(-2, 4, RNG.normal(size=25) + 1j * RNG.normal(size=25), False)
        d = json.loads(f.dumps())
        back = ConeFunction.from_json_dict(d)
        assert back.degree == -2 and np.allclose(back.coeffs, f.coeffs)
        with pytest.raises(ValueError):
            ConeFunction.from_json_dict({"degree": 0, "lmax": 2, "coeffs": [[3, 0, 1.0, 0.0]]})
        with pytest.raises(ValueError):
            ConeFunction.from_json_dict({"degree": 0, "lmax": 2, "coeffs": [[1, 2, 1.0, 0.0]]})
        # missing entries mean zero
        sparse = ConeFunction.from_json_dict({"degree": 0, "lmax": 3, "coeffs": [[1, 0, 1.0, 0.0]]})
        assert sparse.coeff(2, 1) == 0.0

    def test_effective_lmax(self):
        c = np.zeros(81, dtype=complex)
        c[0] = 1.0
        c[5] = 1e-3  # l = 2 entry
        f = ConeFunction(0, 8, c, False)
        assert f.effective_lmax() == 2
        assert ConeFunction.zeros(0, 8).effective_lmax() == 0


class TestInvariantIntegral:
    def test_point_charge_closed_form(self):
        for chi in (0.0, 0.9, 1.5):
            v = HyperboloidPoint.boosted(chi, [0.1, 0.3, 1.0]) if chi else REST
            c = coulomb_c(v, 1.0, 48)
            assert abs(integrate_invariant(c) - 4 * np.pi) < 1e-12 * 4 * np.pi
            assert abs(integrate_invariant(c, "quadrature") - 4 * np.pi) < 1e-12 * 4 * np.pi
            assert abs(brute_coulomb_integral(chi) - 4 * np.pi) < 1e-10

    def test_zero_and_potential(self):
        assert integrate_invariant(ConeFunction.zeros(-2, 8)) == 0.0
        D = ConeFunction.from_callable(lambda n: n[2] * n[0], 0, 16)
        assert abs(integrate_invariant(dsquare(D))) < 1e-10

    def test_wrong_degree_rejected(self):
        with pytest.raises(DegreeError):
            integrate_invariant(ConeFunction.zeros(0, 4))


class TestWaveOperator:
    def test_symbolic_oracle(self):
        # extending the l=1 section f = l_x/l_t to degree 0 and applying the
        # flat wave operator gives 2 l_x / l_t^3, i.e. twice the section
        f = ConeFunction.from_callable(lambda n: n[0], 0, 12)
        g = grid_for(12)
        assert np.max(np.abs(dsquare(f).section(g) - 2 * g.unit_vectors()[0])) < 1e-12

    def test_constants_killed(self):
        assert dsquare(ConeFunction.constant(3.0, 6)).norm() == 0.0

    def test_log_potential_identity(self):
        v = HyperboloidPoint.boosted(1.5, [0, 0, 1.0])
        F = log_F(v, REST, 1.0, 48)
        g = grid_for(48)
        target = coulomb_c(REST, 1.0, 48) - coulomb_c(v, 1.0, 48)
        assert np.max(np.abs(dsquare(F).section(g) - target.section(g))) < 1e-8

    def test_wrong_degree_rejected(self):
        with pytest.raises(DegreeError):
            dsquare(ConeFunction.zeros(-2, 4))


class TestPotential:
    def test_examples(self):
        v = HyperboloidPoint.boosted(0.7, [0.2, 0.1, 1.0])
        diff = coulomb_c(HyperboloidPoint.rest(), 1.0, 32) - coulomb_c(v, 1.0, 32)
        F = solve_F(diff)
        assert np.max(np.abs(dsquare(F).coeffs - diff.coeffs)) < 1e-12
        assert solve_F(ConeFunction.zeros(-2, 8)).norm() == 0.0
        with pytest.raises(NotCoexactError) as exc:
            solve_F(coulomb_c(v, 1.0, 32))
        assert abs(exc.value.mean - 4 * np.pi) < 1e-10

    def test_roundtrip_both_ways(self):
        D = ConeFunction.from_callable(lambda n: n[0] ** 3 - n[1] * n[2], 0, 24)
        F = solve_F(dsquare(D))
        assert np.max(np.abs(F.coeffs[1:] - D.coeffs[1:])) < 1e-13


class TestGradient:
    def test_trivial_constant(self):
        g = grid_for(5)
        secs = gradient_sections(ConeFunction.constant(1.7, 4), g)
        assert np.max(np.abs(secs)) < 1e-13

    def test_euler_identity(self):
        for deg in (0, -2):
            f = ConeFunction.from_callable(lambda n: n[2] ** 2 + 0.3 * n[0], deg, 16)
            g = grid_for(16)
            secs = gradient_sections(f, g)
            n = g.unit_vectors()
            euler = secs[0] + np.einsum("i...,i...->...", n, secs[1:])
            target = deg * f.section(g)
            assert np.max(np.abs(euler - target)) < 1e-10

    def test_cone_gradient_degree_and_bandwidth(self):
        f = ConeFunction.from_callable(lambda n: n[0] * n[1], 0, 8)
        parts = cone_gradient(f)
        assert all(p.degree == -1 and p.lmax == 9 for p in parts)


class TestGenerator:
    def test_constant_killed(self):
        assert lorentz_generator(ConeFunction.constant(1.0, 6), (0, 3)).norm() < 1e-14

    def test_zero_integral_on_charged(self):
        c = coulomb_c(HyperboloidPoint.boosted(1.0, [0.3, 0, 1.0]), 1.0, 32)
        for plane in ((0, 1), (0, 3), (1, 2), (2, 3)):
            assert abs(integrate_invariant(lorentz_generator(c, plane))) < 1e-10

    def test_quadratic_contraction_vanishes(self):
        eta = np.array([1.0, -1, -1, -1])
        for deg in (0, -2):
            f = ConeFunction.from_callable(
                lambda n: 1.0 / (1.2 - 0.4 * n[2]) ** 2 + 0.1 * n[0], deg, 16
            )
            acc = None
            for a in range(4):
                for b in range(a + 1, 4):
                    t = (-eta[a] * eta[b]) * lorentz_generator(
                        lorentz_generator(f, (a, b)), (a, b)
                    )
                    acc = t if acc is None else acc + t
            assert np.max(np.abs(acc.section(grid_for(acc.lmax)))) < 1e-6


class TestPullback:
    def test_identity(self):
        f = ConeFunction.from_callable(lambda n: n[0] + n[2] ** 2, 0, 12)
        g = lorentz_pullback(f, LorentzTransform.identity())
        assert np.max(np.abs(g.coeffs - f.coeffs)) < 1e-12

    def test_invariant_integral_preserved(self):
        c = coulomb_c(REST, 1.0, 48)
        L = LorentzTransform.boost(1.5, [0.1, 0.2, 1.0])
        assert abs(integrate_invariant(lorentz_pullback(c, L)) - 4 * np.pi) < 1e-8

    def test_point_charge_covariance(self):
        v = HyperboloidPoint.boosted(0.6, [0, 1.0, 0.2])
        L = LorentzTransform.boost(0.9, [1.0, 0, 0.4]) @ LorentzTransform.rotation(0.5, [0, 0, 1])
        a = lorentz_pullback(coulomb_c(v, 1.0, 48), L)
        b = coulomb_c(v.transform(L), 1.0, 48)
        g = grid_for(48)
        assert np.max(np.abs(a.section(g) - b.section(g))) < 1e-8


class TestChargeSections:
    def test_rest_frame_is_constant(self):
        c = coulomb_c(REST, 2.0, 8)
        assert abs(c.coeff(0, 0) - 2.0 * math.sqrt(4 * math.pi)) < 1e-12
        assert np.max(np.abs(c.coeffs[1:])) < 1e-12

    def test_log_antisymmetry(self):
        v = HyperboloidPoint.boosted(0.8, [0, 0, 1.0])
        u = HyperboloidPoint.boosted(0.3, [1.0, 0, 0])
        a = log_F(v, u, 1.0, 24)
        b = log_F(u, v, 1.0, 24)
        assert np.max(np.abs((a + b).coeffs)) < 1e-12

    def test_log_knorm_closed_form(self):
        chi = 1.0
        v = HyperboloidPoint.boosted(chi, [0, 0, 1.0])
        F = log_F(v, REST, 1.0, 48)
        knorm = float(np.sum(laplace_eigs(48) * np.abs(F.coeffs) ** 2).real) / (4 * np.pi)
        assert abs(knorm - 2 * (chi / math.tanh(chi) - 1)) < 1e-10


class TestMinkowskiTypes:
    def test_lorentz_invariants(self):
        L = LorentzTransform.boost(1.2, [0.3, -0.5, 1.0]) @ LorentzTransform.rotation(
            1.1, [1, 2, 0.5]
        )
        m = L.matrix
        assert np.max(np.abs(m.T @ METRIC @ m - METRIC)) < 1e-12
        assert abs(np.linalg.det(m) - 1) < 1e-12
        assert m[0, 0] >= 1
        inv = L.inverse()
        assert np.max(np.abs(inv.matrix @ m - np.eye(4))) < 1e-12

    def test_rejects_improper_matrix(self):
        bad = np.diag([1.0, 1.0, 1.0, -1.0])
        with pytest.raises(ValueError):
            LorentzTransform(bad)

    def test_hyperboloid_validation(self):
        with pytest.raises(ValueError):
            HyperboloidPoint(np.array([1.0, 0.5, 0, 0]))
        v = HyperboloidPoint.boosted(0.8, [0, 0, 1])
        assert abs(mdot(v.vec, v.vec) - 1) < 1e-12
        # v.l > 0 for null directions
        g = grid_for(8)
        assert np.min(v.dot_sections(g)) > 0
