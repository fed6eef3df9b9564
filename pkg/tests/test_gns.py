import math

import numpy as np
import pytest

from coneweyl.cone import ConeFunction, HyperboloidPoint, coulomb_c, dsquare, sh_dot
from coneweyl.gns import (
    GnsVector,
    KVector,
    dstar_gram,
    gns_inner,
    gram,
    j_map,
    k_inner,
    k_norm_sq,
    state,
)
from coneweyl.lorentz import hyperbolic_kernel
from coneweyl.params import Params
from coneweyl.sampling import random_hyperboloid, smooth_function
from coneweyl.weyl import WeylElement, multiply, weyl

P = Params()
RNG = np.random.default_rng(23)
REST = HyperboloidPoint.rest()
SINCOS = ConeFunction.from_callable(lambda n: n[0], 0, P.lmax)


def charged(v, n):
    return weyl(
        ConeFunction.zeros(0, P.lmax), float(n) * coulomb_c(v, P.e, P.lmax), P.e
    )


class TestKInner:
    def test_example_two_thirds(self):
        assert abs(k_inner(KVector(SINCOS), KVector(SINCOS)) - 2 / 3) < 1e-13

    def test_constants_are_null(self):
        const = KVector(ConeFunction.constant(5.0, 8))
        assert const.G.norm() == 0.0
        assert k_norm_sq(const) == 0.0

    def test_sesquilinear(self):
        a = KVector(smooth_function(RNG, 16, 8, real=False))
        b = KVector(smooth_function(RNG, 16, 8, real=False))
        assert abs(k_inner(a, b) - np.conj(k_inner(b, a))) < 1e-13
        assert abs(k_inner(2j * a, b) + 2j * k_inner(a, b)) < 1e-12


class TestJMap:
    def test_norm_split(self):
        D = smooth_function(RNG, 16, 8)
        F = smooth_function(RNG, 16, 8)
        j = j_map(D, F, P)
        split = k_norm_sq(KVector(D)) / P.kappa + P.kappa * k_norm_sq(KVector(F))
        assert abs(k_norm_sq(j) - split) < 1e-12

    def test_value_example(self):
        j = j_map(SINCOS, ConeFunction.zeros(0, P.lmax), P)
        assert abs(k_norm_sq(j) - math.pi / 3) < 1e-13

    def test_pure_imaginary_when_d_zero(self):
        F = smooth_function(RNG, 12, 6)
        j = j_map(ConeFunction.zeros(0, 12), F, P)
        assert np.max(np.abs((j.G.real_part()).coeffs)) < 1e-14


class TestState:
    def test_unit_and_charged(self):
        assert state(WeylElement.unit(), P) == 1.0
        assert state(charged(REST, 1), P) == 0.0

    def test_gaussian_example(self):
        W = weyl(SINCOS, ConeFunction.zeros(-2, P.lmax), P.e)
        assert abs(state(W, P) - math.exp(-math.pi / 12)) < 1e-13

    def test_bounded_by_one(self):
        for _ in range(5):
            W = weyl(smooth_function(RNG, P.lmax, 8), dsquare(smooth_function(RNG, P.lmax, 8)), P.e)
            assert abs(state(W, P)) <= 1.0 + 1e-15


class TestGnsInner:
    def test_hyperbolic_kernel(self):
        for chi in (0.25, 1.0):
            v = HyperboloidPoint.boosted(chi, [0, 0, 1.0])
            for n in (1, 2):
                got = gns_inner(charged(REST, n), charged(v, n), P)
                assert abs(got - hyperbolic_kernel(REST, v, n, P)) < 1e-8

    def test_sector_orthogonality_exact(self):
        WD = weyl(smooth_function(RNG, P.lmax, 8), dsquare(smooth_function(RNG, P.lmax, 8)), P.e)
        assert gns_inner(charged(REST, 1), WD, P) == 0.0

    def test_charge_phase(self):
        v = HyperboloidPoint.boosted(0.7, [0.3, 0.1, 1.0])
        for lam in (0.1, 1.0, math.pi):
            Wl = weyl(ConeFunction.constant(lam, P.lmax), ConeFunction.zeros(-2, P.lmax), P.e)
            for n in (-2, -1, 0, 1, 2):
                psi = charged(v, n)
                got = gns_inner(psi, multiply(Wl, psi), P)
                assert abs(got - np.exp(1j * lam * n * P.e)) < 1e-10

    def test_conjugate_symmetry(self):
        A = weyl(smooth_function(RNG, P.lmax, 8), dsquare(smooth_function(RNG, P.lmax, 8)), P.e)
        B = weyl(smooth_function(RNG, P.lmax, 8), dsquare(smooth_function(RNG, P.lmax, 8)), P.e)
        assert abs(gns_inner(A, B, P) - np.conj(gns_inner(B, A, P))) < 1e-14

    def test_creation_vectors_rejected(self):
        vec = GnsVector(charged(REST, 0), KVector(SINCOS))
        with pytest.raises(ValueError):
            gns_inner(vec, vec, P)

    def test_sector_label(self):
        assert GnsVector(charged(REST, 2)).sector() == 2
        mixed = WeylElement.from_terms(charged(REST, 1).terms + charged(REST, 0).terms)
        assert GnsVector(mixed).sector() is None


class TestGram:
    def test_single_unit_vector(self):
        rep = gram([WeylElement.unit()], P)
        assert rep.matrix.shape == (1, 1) and abs(rep.matrix[0, 0] - 1) < 1e-14
        assert rep.psd

    def test_two_equal_vectors(self):
        W = charged(REST, 1)
        rep = gram([W, W], P)
        assert np.allclose(rep.matrix, 1.0)
        assert abs(rep.min_eig) < 1e-12
        assert rep.psd

    def test_report_format(self):
        rep = gram([WeylElement.unit()], P)
        d = rep.to_json_dict()
        assert set(d) == {"matrix", "min_eig", "psd", "tol"}
        assert d["matrix"][0][0] == [1.0, 0.0]


class TestProductOracle:
    def test_equal_points_factorize(self):
        from coneweyl.gns import product_formula_oracle

        D = smooth_function(RNG, P.lmax, 8)
        F = smooth_function(RNG, P.lmax, 8)
        rhs = product_formula_oracle(REST, REST, 1, (D, F), (D, F), P)
        A = multiply(charged(REST, 1), weyl(D, dsquare(F), P.e))
        lhs = gns_inner(A, A, P)
        assert abs(lhs - rhs) < 1e-12 * abs(lhs)

    def test_neutral_sector_trivial_factor(self):
        from coneweyl.gns import product_formula_oracle

        v = HyperboloidPoint.boosted(0.9, [1.0, 0, 0])
        D = smooth_function(RNG, P.lmax, 8)
        F = smooth_function(RNG, P.lmax, 8)
        rhs = product_formula_oracle(v, REST, 0, (D, F), (F, D), P)
        lhs = gns_inner(weyl(D, dsquare(F), P.e), weyl(F, dsquare(D), P.e), P)
        assert abs(lhs - rhs) < 1e-12

    def test_requires_model_kappa(self):
        from coneweyl.gns import product_formula_oracle

        with pytest.raises(ValueError):
            product_formula_oracle(
                REST, REST, 1, (SINCOS, SINCOS), (SINCOS, SINCOS), P.with_(kappa=1.0)
            )


class TestCreationPairs:
    def test_equal_points_reduce_to_k_inner(self):
        G = KVector(smooth_function(RNG, P.lmax, 8, real=False))
        Gp = KVector(smooth_function(RNG, P.lmax, 8, real=False))
        pa, pb = dstar_gram(REST, REST, 3, G, Gp, P)
        assert abs(pa - k_inner(G, Gp)) < 1e-12
        assert abs(pb - k_inner(G, Gp)) < 1e-12

    def test_routes_agree_with_nonzero_correction(self):
        v2 = HyperboloidPoint.boosted(1.0, [1.0, 0.2, 0])
        G = KVector(ConeFunction.from_callable(lambda n: n[0] + 0.4j * n[2], 0, P.lmax))
        pa, pb = dstar_gram(REST, v2, 2, G, G, P)
        assert abs(pa - pb) < 1e-8 * abs(pb)
        kernel = gns_inner(charged(REST, 2), charged(v2, 2), P)
        naive = kernel * k_inner(G, G)
        assert abs(pa - naive) > 1e-3 * abs(naive)

    def test_orthogonal_partner_kills_correction(self):
        v2 = HyperboloidPoint.boosted(0.8, [1.0, 0, 0])
        dc = coulomb_c(v2, P.e, P.lmax) - coulomb_c(REST, P.e, P.lmax)
        dc0 = ConeFunction(0, dc.lmax, dc.coeffs, dc.real_flag)
        raw = smooth_function(RNG, P.lmax, 8, real=False)
        overlap = sh_dot(dc, raw) / sh_dot(dc, dc)
        Gperp = KVector(raw - complex(overlap) * dc0)
        G = KVector(smooth_function(RNG, P.lmax, 8, real=False))
        pa, pb = dstar_gram(REST, v2, 1, G, Gperp, P)
        kernel = gns_inner(charged(REST, 1), charged(v2, 1), P)
        assert abs(pa - pb) < 1e-10
        assert abs(pb - kernel * k_inner(G, Gperp)) < 1e-12


class TestKappaDependence:
    def test_state_values_differ(self):
        W = weyl(SINCOS, ConeFunction.zeros(-2, P.lmax), P.e)
        assert abs(state(W, P) - state(W, P.with_(kappa=1.0))) > 1e-3


class TestBandLimitConvergence:
    def test_kernel_residual_decays_under_refinement(self):
        # the band-limited subspace stands in for the smooth function class;
        # its adequacy shows up as spectral decay of the identity residual
        v = HyperboloidPoint.boosted(1.5, [0, 0, 1.0])
        closed = hyperbolic_kernel(REST, v, 1, P)
        residuals = []
        for lmax in (12, 24, 48):
            pp = P.with_(lmax=lmax)
            lhs = gns_inner(
                weyl(ConeFunction.zeros(0, lmax), coulomb_c(REST, 1.0, lmax), 1.0),
                weyl(ConeFunction.zeros(0, lmax), coulomb_c(v, 1.0, lmax), 1.0),
                pp,
            )
            residuals.append(abs(lhs - closed) / closed)
        assert residuals[0] > 100 * residuals[1] > 100 * residuals[2]
        assert residuals[2] < 1e-8
