"""Representation-level structure: the boost-moment tensor of a pair, the
k/h construction behind the second-Casimir reduction, the Casimir
annihilation family, the axis identity, the hyperbolic kernel of charged
vectors, and the principal-series spinor map.

Index conventions, single-sourced here: signature (+,-,-,-), totally
antisymmetric symbol with eps^{0123} = +1 (upper indices).  All residual
norms are convention independent, which the test battery checks by flipping
the symbol's sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

import numpy as np

from .cone import (
    FOUR_PI,
    ConeFunction,
    HyperboloidPoint,
    METRIC,
    coulomb_c,
    gradient_sections,
    lorentz_generator,
    mdot,
    sh_dot,
    solve_F,
)
from .errors import ConeWeylError
from .gns import KVector, k_inner
from .grid import grid_for, laplace_eigs
from .params import Params
from .weyl import SymplecticPair

PLANES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


@lru_cache(maxsize=2)
def epsilon4(sign: float = 1.0) -> np.ndarray:
    eps = np.zeros((4, 4, 4, 4))
    for perm in permutations(range(4)):
        p = 1.0
        lst = list(perm)
        for i in range(4):
            for j in range(i + 1, 4):
                if lst[i] > lst[j]:
                    p = -p
        eps[perm] = sign * p
    return eps


@dataclass(frozen=True)
class AntisymTensor:
    """Antisymmetric rank-2 tensor, components with both indices lower."""

    components: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.components)
        if m.shape != (4, 4) or np.max(np.abs(m + m.T)) > 1e-10 * (1 + np.max(np.abs(m))):
            raise ValueError("components must form an antisymmetric 4x4 array")
        m = 0.5 * (m - m.T)
        m.setflags(write=False)
        object.__setattr__(self, "components", m)

    @classmethod
    def from_plane_values(cls, values: dict) -> "AntisymTensor":
        m = np.zeros((4, 4), dtype=np.result_type(*values.values(), np.float64))
        for (a, b), v in values.items():
            m[a, b] = v
            m[b, a] = -v
        return cls(m)

    def plane(self, a: int, b: int):
        return self.components[a, b]

    def raised(self) -> np.ndarray:
        return METRIC @ self.components @ METRIC

    def dual(self, sign: float = 1.0) -> "AntisymTensor":
        """Dual with indices lowered back: (*T)_ab = g_ac g_bd (1/2) e^{cdef} T_ef."""
        up = 0.5 * np.einsum("cdef,ef->cd", epsilon4(sign), self.components)
        return AntisymTensor(METRIC @ up @ METRIC)

    def norm(self) -> float:
        return float(np.linalg.norm(self.components))

    def electric(self) -> np.ndarray:
        """Contravariant electric part E^i = T_{0i} for a field-strength tensor."""
        return np.real(self.components[0, 1:]).copy()


# ---------------------------------------------------------------------------
# moment tensor and the k/h construction


def m_tensor(p: SymplecticPair, params: Params) -> AntisymTensor:
    """m_ab = (1/4 pi) integral of D * (L_ab c); real and antisymmetric."""
    vals = {}
    for a, b in PLANES:
        lc = lorentz_generator(p.c, (a, b))
        z = sh_dot(p.D, lc) / FOUR_PI
        vals[(a, b)] = float(z.real)
    return AntisymTensor.from_plane_values(vals)


def _split_pair(p: SymplecticPair, u: HyperboloidPoint, params: Params):
    """c = n c_u + dsquare(F); returns the complex combination j(D, F)."""
    rem = p.c - float(p.n) * coulomb_c(u, params.e, p.c.lmax)
    F = solve_F(rem, params.tol("zero_mean"))
    rk = math.sqrt(params.kappa)
    return (1.0 / rk) * p.D + (-1j * rk) * F


def k_sections(p: SymplecticPair, u: HyperboloidPoint, params: Params, grid):
    """Sections of the four components k_b = d_b j(D, F) + i n e sqrt(kappa)
    u_b / (u.l); lower index b, shape (4, n_theta, n_phi)."""
    j = _split_pair(p, u, params)
    secs = gradient_sections(j, grid).astype(np.complex128)
    pref = 1j * p.n * params.e * math.sqrt(params.kappa)
    ul = u.dot_sections(grid)
    n = grid.unit_vectors()
    ulow = np.array([u.vec[0], -u.vec[1], -u.vec[2], -u.vec[3]])
    for b in range(4):
        secs[b] = secs[b] + pref * ulow[b] / ul
    return secs


def k_vector(p: SymplecticPair, u: HyperboloidPoint, params: Params):
    """The k_b representative as four degree -1 cone functions (band limit
    lmax + 1).  The contraction k.l equals i n e sqrt(kappa) identically;
    the gauge ambiguity of the gradient drops out of that contraction."""
    g = grid_for(p.c.lmax + 1)
    secs = k_sections(p, u, params, g)
    return tuple(ConeFunction.from_section(secs[b], g, -1) for b in range(4))


def k_dot_l_sections(p: SymplecticPair, u: HyperboloidPoint, params: Params):
    """Pointwise k.l = k_0 + sum_i n_i k_i on the working grid."""
    g = grid_for(p.c.lmax + 1)
    secs = k_sections(p, u, params, g)
    n = g.unit_vectors()
    return secs[0] + np.einsum("i...,i...->...", n, secs[1:])


@dataclass(frozen=True)
class HData:
    """The six h_ab = l_a k_b - l_b k_a classes and their contraction data:
    gram4[a,b,c,d] = <[h_ab], [h_cd]> in the one-excitation product."""

    gram4: np.ndarray
    m4: np.ndarray
    trace: float

    def gram6(self) -> np.ndarray:
        return np.array(
            [[self.gram4[pa + pb] for pb in PLANES] for pa in PLANES]
        )


def _h_data(p: SymplecticPair, u: HyperboloidPoint, params: Params) -> HData:
    lmax = p.c.lmax
    g = grid_for(lmax + 2)
    ks = k_sections(p, u, params, g)
    n = g.unit_vectors()
    llow = np.empty((4,) + n.shape[1:])
    llow[0] = 1.0
    llow[1:] = -n
    hfun = []
    for a, b in PLANES:
        sec = llow[a] * ks[b] - llow[b] * ks[a]
        hfun.append(ConeFunction.from_section(sec, g, 0).drop_mean())
    M6 = np.array([[k_inner(hi, hj) for hj in hfun] for hi in hfun])
    gram4 = np.zeros((4, 4, 4, 4), dtype=np.complex128)
    for i, (a, b) in enumerate(PLANES):
        for j, (c, d) in enumerate(PLANES):
            v = M6[i, j]
            gram4[a, b, c, d] = v
            gram4[b, a, c, d] = -v
            gram4[a, b, d, c] = -v
            gram4[b, a, d, c] = v
    m4 = m_tensor(p, params).components
    return HData(gram4, m4, float(np.trace(M6).real))


def h_gram(p: SymplecticPair, u: HyperboloidPoint, params: Params) -> np.ndarray:
    """6x6 Hermitian positive-semidefinite Gram matrix of the h components,
    planes ordered (01, 02, 03, 12, 13, 23)."""
    return _h_data(p, u, params).gram6()


def residual_scale(p: SymplecticPair, data: HData, params: Params) -> float:
    """Threshold scale n^2 e^2 kappa tr(h gram); invariant under rescaling e."""
    return p.n**2 * params.e**2 * params.kappa * data.trace


def casimir2_residual(
    p: SymplecticPair,
    u: HyperboloidPoint,
    params: Params,
    data: HData | None = None,
    eps_sign: float = 1.0,
) -> float:
    """Norm of the second Casimir applied to the cyclic vector of W(D, c),
    assembled in closed form by Wick contraction:

    ||C2 W Omega||^2 = 1/4 [ ||2-particle||^2 + ||1-particle||^2 + scalar^2 ]

    with the 2-particle piece from symmetrized pairs of dual-contracted Gram
    entries, the 1-particle piece weighted by the dual moment tensor, and the
    scalar piece (dual-m contracted with m) squared."""
    data = data if data is not None else _h_data(p, u, params)
    eps = epsilon4(eps_sign)
    G4 = data.gram4
    m4 = data.m4
    e1 = np.einsum("abef,cdgh,efgh,abcd->", eps, eps, G4, G4)
    e2 = np.einsum("abef,cdgh,efcd,abgh->", eps, eps, G4, G4)
    two_particle = (e1 + e2).real / 16.0
    w = 0.5 * np.einsum("abcd,cd->ab", eps, m4)
    one_particle = 2.0 * np.einsum("ab,cd,abcd->", w, w, G4).real
    scalar = float(np.einsum("ab,ab->", w, m4))
    total = 0.25 * (two_particle + one_particle + scalar**2)
    return float(math.sqrt(max(0.0, total)))


def axis_residual(
    p: SymplecticPair,
    v: HyperboloidPoint,
    x: np.ndarray,
    params: Params,
    u: HyperboloidPoint | None = None,
    data: HData | None = None,
    eps_sign: float = 1.0,
) -> np.ndarray:
    """Norms, for each free index a, of
    e^{abcd} (v + i x)_b [ -(1/sqrt2) dstar(h_cd) + m_cd ] Omega,
    which annihilate the family vectors."""
    u = u if u is not None else v
    data = data if data is not None else _h_data(p, u, params)
    eps = epsilon4(eps_sign)
    xi_low = METRIC @ (np.asarray(v.vec, dtype=np.complex128) + 1j * np.asarray(x, dtype=np.float64))
    W = np.einsum("abcd,b->acd", eps, xi_low)
    ynorm2 = np.einsum("acd,aef,cdef->a", np.conj(W), W, data.gram4).real
    s = np.einsum("acd,cd->a", W, data.m4)
    return np.sqrt(np.maximum(0.0, 0.5 * ynorm2 + np.abs(s) ** 2))


# ---------------------------------------------------------------------------
# the Casimir annihilation family


@dataclass(frozen=True)
class CasimirFamilyPoint:
    """Family parameters: v on the hyperboloid, x spacelike (or zero) with
    x.v = 0, a constant lam, and an integer charge n."""

    v: HyperboloidPoint
    x: np.ndarray
    lam: float
    n: int

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        if x.shape != (4,):
            raise ValueError("x must be a 4-vector")
        xsq = mdot(x, x)
        if np.any(x != 0.0) and xsq >= 0:
            raise ValueError("x must be spacelike (or exactly zero)")
        if abs(mdot(x, self.v.vec)) > 1e-12 * (1.0 + np.linalg.norm(x)):
            raise ValueError("x must be orthogonal to v")
        x = x.copy()
        x.setflags(write=False)
        object.__setattr__(self, "x", x)


def kernel_family(pt: CasimirFamilyPoint, params: Params) -> SymplecticPair:
    """The pair annihilated by the second Casimir:
    D = -n e kappa arctan((x.l)/(v.l)) + lam,
    c = n e (1 - x^2) ((v.l)^2 - (x.l)^2) / ((v.l)^2 + (x.l)^2)^2."""
    g = grid_for(params.lmax)
    n = g.unit_vectors()
    vl = pt.v.dot_sections(g)
    xl = pt.x[0] - np.einsum("i,i...->...", pt.x[1:], n)
    ne = pt.n * params.e
    D = -ne * params.kappa * np.arctan2(xl, vl) + pt.lam
    xsq = mdot(pt.x, pt.x)
    c = ne * (1.0 - xsq) * (vl**2 - xl**2) / (vl**2 + xl**2) ** 2
    Df = ConeFunction.from_section(D, g, 0)
    cf = ConeFunction.from_section(c, g, -2)
    return SymplecticPair(Df, cf, pt.n)


# ---------------------------------------------------------------------------
# the hyperbolic kernel


def hyperbolic_kernel(v: HyperboloidPoint, u: HyperboloidPoint, n: int, params: Params) -> float:
    """Closed form exp(-(n e)^2/pi (chi coth chi - 1)) of the inner product
    of two charged cyclic vectors, chi the hyperbolic angle between v and u.
    Requires the model value kappa = 2/pi, which the constant assumes."""
    if abs(params.kappa - 2.0 / math.pi) > 1e-12:
        raise ValueError("the hyperbolic kernel constant assumes kappa = 2/pi")
    dot = float(mdot(v.vec, u.vec))
    if dot < 1.0 - 1e-9:
        raise ConeWeylError(f"v.u = {dot} < 1: arguments are not both on the hyperboloid")
    chi = math.acosh(max(1.0, dot))
    if chi < 1e-6:
        body = chi * chi / 3.0 - chi**4 / 45.0
    else:
        body = chi / math.tanh(chi) - 1.0
    return math.exp(-((n * params.e) ** 2) / math.pi * body)


# ---------------------------------------------------------------------------
# principal-series spinor map


@lru_cache(maxsize=8)
def _spinor_scale(lmax: int = 16) -> float:
    """One-time calibration of the dyad convention's real scale on the single
    section sin(theta) cos(phi); no further tuning enters the map."""
    G0 = ConeFunction.from_callable(lambda n: n[0], 0, lmax)
    g = grid_for(lmax)
    raw = _spinor_raw(G0, g)
    target = k_inner(KVector(G0), KVector(G0)).real
    return math.sqrt(target / float(g.integrate(np.abs(raw) ** 2).real))


def _spinor_raw(G: ConeFunction, g) -> np.ndarray:
    p = gradient_sections(G, g)
    th = g.theta[:, None]
    ph = g.phi[None, :]
    c2 = np.cos(th / 2.0) * np.ones_like(ph)
    s2 = np.sin(th / 2.0) * np.ones_like(ph)
    eip = np.exp(1j * ph) * np.ones_like(th)
    o0, o1 = c2, s2 * eip
    i0, i1 = -s2 * eip, c2
    m00 = p[0] + p[3]
    m01 = p[1] + 1j * p[2]
    m10 = p[1] - 1j * p[2]
    m11 = p[0] - p[3]
    return o0 * i0 * m00 + o0 * i1 * m01 + o1 * i0 * m10 + o1 * i1 * m11


def principal_series_map(G: ConeFunction, lmax: int | None = None) -> np.ndarray:
    """Section values of the spin-weighted density g with
    integral(conj(g1) g2) equal to the one-excitation inner product of the
    source functions.  The spinor dyad at (theta, phi) is
    (cos(theta/2), sin(theta/2) e^{i phi}); the gradient's gauge ambiguity
    drops out of the contraction.  Returns values on grid_for(lmax)."""
    if G.degree != 0:
        raise ConeWeylError("the spinor map applies to degree-0 functions")
    lmax = lmax if lmax is not None else G.lmax
    g = grid_for(lmax)
    return _spinor_scale() * _spinor_raw(G.pad_to(lmax) if lmax > G.lmax else G, g)


def spinor_inner(g1: np.ndarray, g2: np.ndarray, lmax: int) -> complex:
    g = grid_for(lmax)
    return complex(g.integrate(np.conj(g1) * g2))
