import math

import numpy as np
import pytest

from coneweyl.cone import ConeFunction, HyperboloidPoint, coulomb_c, dsquare
from coneweyl.errors import NonIntegerChargeError
from coneweyl.sampling import random_lorentz, smooth_function
from coneweyl.weyl import (
    SymplecticPair,
    WeylElement,
    adjoint,
    charge_index,
    lorentz_automorphism,
    multiply,
    symplectic,
    weyl,
)

RNG = np.random.default_rng(11)
LMAX = 24
REST = HyperboloidPoint.rest()


def rand_pair(n=0, scale=1.0):
    D = smooth_function(RNG, LMAX, 8, scale=scale)
    c = dsquare(smooth_function(RNG, LMAX, 8, scale=scale))
    if n:
        c = (c + float(n) * coulomb_c(REST, 1.0, LMAX)).real_part()
    return SymplecticPair.make(D, c, 1.0)


class TestCharge:
    def test_examples(self):
        v = HyperboloidPoint.boosted(1.5, [0.2, 0, 1.0])
        assert charge_index(coulomb_c(v, 1.0, 48), 1.0) == 1
        assert charge_index(dsquare(smooth_function(RNG, LMAX, 8)), 1.0) == 0
        with pytest.raises(NonIntegerChargeError) as exc:
            charge_index(1.5 * coulomb_c(v, 1.0, 48), 1.0)
        assert abs(exc.value.residual - 0.5) < 1e-9

    def test_additivity_exact(self):
        p = rand_pair(2)
        q = rand_pair(-1)
        assert (p + q).n == 1
        assert (-p).n == -2

    def test_scaling_guards_charge(self):
        p = rand_pair(1)
        with pytest.raises(NonIntegerChargeError):
            p.scale(0.5)
        assert p.scale(3.0).n == 3
        assert rand_pair(0).scale(0.37).n == 0


class TestSymplectic:
    def test_constant_against_charge(self):
        lam = 1.3
        pc = SymplecticPair.make(ConeFunction.constant(lam, LMAX), ConeFunction.zeros(-2, LMAX), 1.0)
        pn = rand_pair(3)
        # only the charged part of c pairs with a constant D
        assert abs(symplectic(pc, pn) - lam * 3) < 1e-12

    def test_antisymmetric_and_bilinear(self):
        p, q, r = rand_pair(), rand_pair(), rand_pair()
        assert abs(symplectic(p, q) + symplectic(q, p)) < 1e-12
        assert symplectic(p, p) == 0.0
        lhs = symplectic(p + q, r)
        assert abs(lhs - symplectic(p, r) - symplectic(q, r)) < 1e-12

    def test_integrated_by_parts_route(self):
        Fa = smooth_function(RNG, LMAX, 8)
        Fb = smooth_function(RNG, LMAX, 8)
        Da = smooth_function(RNG, LMAX, 8)
        Db = smooth_function(RNG, LMAX, 8)
        from coneweyl.cone import sh_dot

        direct = symplectic(
            SymplecticPair.make(Da, dsquare(Fa), 1.0), SymplecticPair.make(Db, dsquare(Fb), 1.0)
        )
        flipped = (sh_dot(Fb, dsquare(Da)).real - sh_dot(Fa, dsquare(Db)).real) / (4 * math.pi)
        assert abs(direct - flipped) < 1e-10


class TestProducts:
    def test_inverse_is_unit(self):
        W = weyl(rand_pair().D, rand_pair().c)
        unit = multiply(W, adjoint(W))
        assert len(unit) == 1
        coeff, gen = unit.terms[0]
        assert abs(coeff - 1) < 1e-14
        assert gen.pair.D.norm() < 1e-12 and gen.pair.c.norm() < 1e-12

    def test_associativity_random_triples(self):
        for _ in range(5):
            A = weyl(rand_pair().D, rand_pair().c)
            B = weyl(rand_pair().D, rand_pair().c)
            C = weyl(rand_pair(1).D, rand_pair(1).c)
            x = multiply(multiply(A, B), C).terms[0][0]
            y = multiply(A, multiply(B, C)).terms[0][0]
            assert abs(x - y) < 1e-12

    def test_charged_square_has_unit_phase(self):
        Wc = weyl(ConeFunction.zeros(0, LMAX), coulomb_c(REST, 1.0, LMAX))
        sq = multiply(Wc, Wc)
        assert len(sq) == 1
        assert abs(sq.terms[0][0] - 1) < 1e-14
        assert sq.terms[0][1].pair.n == 2

    def test_normal_form_merges_and_drops(self):
        p = rand_pair()
        g = weyl(p.D, p.c).terms[0][1]
        e = WeylElement.from_terms([(1.0, g), (1.0 + 0j, g), (-2.0 + 0j, g)])
        assert len(e) == 0
        e2 = WeylElement.from_terms([(1.0, g), (0.5j, g)])
        assert len(e2) == 1 and abs(e2.terms[0][0] - (1 + 0.5j)) < 1e-14

    def test_bilinear_expansion(self):
        p, q = rand_pair(), rand_pair(1)
        A = WeylElement.from_terms(
            [(0.5, weyl(p.D, p.c).terms[0][1]), (2.0, weyl(q.D, q.c).terms[0][1])]
        )
        B = weyl(rand_pair().D, rand_pair().c)
        assert len(multiply(A, B)) == 2


class TestAdjoint:
    def test_involution_and_antihomomorphism(self):
        A = weyl(rand_pair().D, rand_pair().c)
        B = weyl(rand_pair(2).D, rand_pair(2).c)
        two = WeylElement.from_terms([(0.3 - 1j, A.terms[0][1]), (1.5, B.terms[0][1])])
        back = adjoint(adjoint(two))
        for (c1, g1), (c2, g2) in zip(back.terms, two.terms):
            assert abs(c1 - c2) < 1e-14 and g1.pair.distance(g2.pair) < 1e-14
        lhs = adjoint(multiply(A, B))
        rhs = multiply(adjoint(B), adjoint(A))
        assert abs(lhs.terms[0][0] - rhs.terms[0][0]) < 1e-13
        assert lhs.terms[0][1].pair.distance(rhs.terms[0][1].pair) < 1e-12

    def test_unit_fixed(self):
        u = WeylElement.unit()
        au = adjoint(u)
        assert len(au) == 1 and abs(au.terms[0][0] - 1) < 1e-15


class TestAutomorphism:
    def test_identity_and_charge_preservation(self):
        from coneweyl.cone import LorentzTransform

        A = weyl(rand_pair(1).D, rand_pair(1).c)
        out = lorentz_automorphism(A, LorentzTransform.identity())
        assert out.terms[0][1].pair.distance(A.terms[0][1].pair) < 1e-11
        L = random_lorentz(RNG, 1.0)
        assert lorentz_automorphism(A, L).terms[0][1].pair.n == 1

    def test_symplectic_invariance(self):
        # the stated tolerance assumes the full default band limit, where the
        # boost tail of the smooth test data is resolved
        def pair48(n=0):
            D = smooth_function(RNG, 48, 6, scale=0.7)
            c = dsquare(smooth_function(RNG, 48, 6, scale=0.7))
            if n:
                c = (c + float(n) * coulomb_c(REST, 1.0, 48)).real_part()
            return SymplecticPair.make(D, c, 1.0)

        p, q = pair48(1), pair48()
        L = random_lorentz(RNG, 1.0)
        assert abs(symplectic(p.transform(L), q.transform(L)) - symplectic(p, q)) < 1e-8


class TestSerialization:
    def test_element_json_roundtrip(self):
        p = rand_pair(1)
        A = WeylElement.from_terms([(0.5 - 0.25j, weyl(p.D, p.c).terms[0][1])])
        back = WeylElement.from_json_dict(A.to_json_dict())
        assert len(back) == 1
        assert abs(back.terms[0][0] - (0.5 - 0.25j)) < 1e-12
        assert back.terms[0][1].pair.distance(p) < 1e-9
        assert back.terms[0][1].pair.n == 1
