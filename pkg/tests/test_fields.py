import math

import numpy as np
import pytest

from coneweyl.cone import ConeFunction, HyperboloidPoint, coulomb_c, dsquare
from coneweyl.errors import ConeProximityError, ConeWeylError
from coneweyl.fields import (
    PhaseField,
    SpacetimePoint,
    eval_em_field_general,
    eval_em_field_regular,
    eval_phase_field,
    field_boundary_term,
    flux_charge,
)
from coneweyl.params import Params
from coneweyl.sampling import smooth_function
from coneweyl.weyl import SymplecticPair

P = Params()
FP = P.with_(lmax=P.fields_lmax)
L = P.fields_lmax
RNG = np.random.default_rng(57)
REST = HyperboloidPoint.rest()

POINT = SymplecticPair.make(ConeFunction.zeros(0, L), coulomb_c(REST, 1.0, L), 1.0)
D0 = smooth_function(RNG, L, 6, scale=0.5)
F0 = smooth_function(RNG, L, 6, scale=0.5)
NEUTRAL = SymplecticPair.make(D0, dsquare(F0), 1.0)
MIXED = SymplecticPair.make(D0, (coulomb_c(REST, 1.0, L) + dsquare(F0)).real_part(), 1.0)


class TestClassification:
    def test_regions(self):
        assert SpacetimePoint(np.array([2.0, 0, 0, 0.5])).classify() == "timelike-future"
        assert SpacetimePoint(np.array([-2.0, 0, 0, 0.5])).classify() == "timelike-past"
        assert SpacetimePoint(np.array([0.2, 0, 0, 2.0])).classify() == "spacelike"
        assert SpacetimePoint(np.array([1.0, 0, 0, 1.01])).classify() == "near-cone"
        assert SpacetimePoint(np.zeros(4)).classify() == "near-cone"


class TestPhaseField:
    def test_point_charge_timelike(self):
        for x in ([2.0, 0.1, 0, 0.3], [5.0, 1.0, -1.0, 0.5]):
            assert abs(eval_phase_field(x, POINT, REST, FP) + 1.0) < 1e-12
        assert abs(eval_phase_field([-2.0, 0, 0.2, 0.1], POINT, REST, FP) - 1.0) < 1e-12

    def test_point_charge_spacelike_profile(self):
        for t, r in ((0.3, 1.0), (-0.5, 2.0)):
            x = [t, 0.0, 0.6 * r, 0.8 * r]
            assert abs(eval_phase_field(x, POINT, REST, FP) + t / r) < 1e-12

    def test_near_cone_refused(self):
        with pytest.raises(ConeProximityError):
            eval_phase_field([1.0, 0, 0, 1.01], MIXED, REST, FP)

    def test_reference_independence(self):
        x = [0.3, 0.2, 0.5, 1.2]
        s1 = eval_phase_field(x, MIXED, REST, FP)
        s2 = eval_phase_field(x, MIXED, HyperboloidPoint.boosted(0.6, [1, 0.2, 0]), FP)
        assert abs(s1 - s2) < 1e-6

    def test_homogeneity(self):
        x = np.array([0.3, 0.2, 0.5, 1.2])
        s1 = eval_phase_field(x, MIXED, REST, FP)
        s2 = eval_phase_field(3.0 * x, MIXED, REST, FP)
        assert abs(s1 - s2) < 1e-6

    def test_wave_equation_residual(self):
        field = PhaseField(MIXED, REST, FP)
        x = np.array([0.2, 0.4, 0.3, 1.4])
        h = 0.02 * float(np.linalg.norm(x))
        c4 = np.array([-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12])
        second = np.empty(4)
        for a in range(4):
            vals = [field(x + o * h * np.eye(4)[a]) for o in (-2, -1, 0, 1, 2)]
            second[a] = float(np.dot(c4, vals)) / h**2
        assert abs(second[0] - second[1:].sum()) < 1e-3 * np.sum(np.abs(second))


class TestMaxwellField:
    def test_coulomb_radial_field(self):
        E = eval_em_field_general([0.0, 0, 0, 2.0], POINT, REST, FP).electric()
        assert np.linalg.norm(E - np.array([0, 0, 0.25])) < 1e-3 * 0.25

    def test_formula_agreement_on_neutral_data(self):
        for x in ([0.2, 0.3, 0.4, 1.5], [2.0, 0.1, 0.2, 0.4]):
            gen = eval_em_field_general(x, NEUTRAL, REST, FP)
            reg = eval_em_field_regular(x, D0, F0, FP)
            assert reg.converged
            num = np.max(np.abs(reg.tensor.components - gen.components))
            assert num < 1e-3 * np.max(np.abs(gen.components))

    def test_zero_data(self):
        reg = eval_em_field_regular([0.2, 0.3, 0.4, 1.5], ConeFunction.zeros(0, L), ConeFunction.zeros(0, L), FP)
        assert reg.tensor.norm() == 0.0

    def test_degree_minus_two_scaling(self):
        x = np.array([0.2, 0.3, 0.4, 1.5])
        F1 = eval_em_field_general(x, NEUTRAL, REST, FP).components
        F2 = eval_em_field_general(2 * x, NEUTRAL, REST, FP).components
        assert np.max(np.abs(4 * F2 - F1)) < 1e-4 * np.max(np.abs(F1))

    def test_boundary_term_analytic_in_regulator(self):
        x = [0.2, 0.3, 0.4, 1.5]
        d0 = 1e-2 * float(np.linalg.norm(x))
        h = 1e-3 * d0

        def bt(w):
            return field_boundary_term(x, D0, F0, d0 + w, FP, node_scale=d0 / 4)[0, 3]

        dre = (bt(h) - bt(-h)) / (2 * h)
        dim = (bt(1j * h) - bt(-1j * h)) / (2j * h)
        assert abs(dre - dim) < 1e-5 * (abs(dre) + abs(dim))

    def test_reality_after_conjugate_pair(self):
        reg = eval_em_field_regular([0.2, 0.3, 0.4, 1.5], D0, F0, FP)
        # antisymmetry is structural; the ladder entries are real by the
        # conjugate pairing
        assert np.max(np.abs(reg.tensor.components + reg.tensor.components.T)) < 1e-14


class TestFlux:
    def test_charges(self):
        for n in (0, 1, 2):
            pair = (
                NEUTRAL
                if n == 0
                else SymplecticPair.make(
                    ConeFunction.zeros(0, L),
                    (float(n) * coulomb_c(HyperboloidPoint.boosted(0.4, [0.3, 0.2, 1.0]), 1.0, L)).real_part(),
                    1.0,
                )
            )
            fl = flux_charge(pair, 2.0, 0.3, FP, n_sphere=(6, 12))
            assert abs(fl - n) < 1e-3 * max(1.0, n)

    def test_radius_and_time_independence(self):
        f1 = flux_charge(POINT, 1.5, 0.2, FP, n_sphere=(6, 12))
        f2 = flux_charge(POINT, 3.0, -0.4, FP, n_sphere=(6, 12))
        assert abs(f1 - f2) < 1e-3

    def test_admissibility_checked(self):
        with pytest.raises(ConeWeylError):
            flux_charge(POINT, 1.0, 2.0, FP)
