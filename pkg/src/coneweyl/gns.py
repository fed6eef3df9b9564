"""The Lorentz-invariant quasi-free state, its cyclic-vector inner products,
Gram-matrix positivity, and the two closed-form oracle computations for
charged-times-excited vectors.

The state vanishes on generators with nonzero charge index and is Gaussian
on the rest: w(W(D, c)) = exp(-1/4 ||j(D, F)||^2) with c = dsquare(F) and
j(D, F) = kappa^{-1/2} D - i kappa^{1/2} F.  Inner products of cyclic
vectors reduce through the Weyl relations to state values, so sector
orthogonality is exact rather than numerical.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .cone import FOUR_PI, ConeFunction, coulomb_c, dsquare, sh_dot, solve_F
from .grid import laplace_eigs
from .params import Params, pmap
from .weyl import SymplecticPair, WeylElement, adjoint, multiply, weyl


@dataclass(frozen=True)
class KVector:
    """One-excitation vector: a complex degree-0 function modulo constants."""

    G: ConeFunction

    def __post_init__(self):
        if self.G.degree != 0:
            raise ValueError("K vectors are classes of degree-0 functions")
        object.__setattr__(self, "G", self.G.drop_mean())

    @classmethod
    def of(cls, f: ConeFunction) -> "KVector":
        return cls(f)

    def __add__(self, other: "KVector") -> "KVector":
        return KVector(self.G + other.G)

    def __mul__(self, s) -> "KVector":
        return KVector(self.G * s)

    __rmul__ = __mul__


def k_inner(G1: KVector | ConeFunction, G2: KVector | ConeFunction) -> complex:
    """(1/4*pi) sum_{l>=1} l(l+1) conj(g1) g2; the positive definite product
    of the one-excitation space."""
    a = (G1.G if isinstance(G1, KVector) else G1).drop_mean()
    b = (G2.G if isinstance(G2, KVector) else G2).drop_mean()
    lmax = max(a.lmax, b.lmax)
    eig = laplace_eigs(lmax)
    return complex(
        np.vdot(a.pad_to(lmax).coeffs, eig * b.pad_to(lmax).coeffs) / FOUR_PI
    )


def k_norm_sq(G) -> float:
    return float(k_inner(G, G).real)


def j_map(D: ConeFunction, F: ConeFunction, params: Params) -> KVector:
    """j(D, F) = kappa^{-1/2} D - i kappa^{1/2} F, constants dropped."""
    rk = math.sqrt(params.kappa)
    return KVector((1.0 / rk) * D + (-1j * rk) * F)


def state(A: WeylElement, params: Params) -> complex:
    """Linear extension of the quasi-free state to a Weyl element."""
    total = 0.0 + 0.0j
    for coeff, gen in A.terms:
        p = gen.pair
        if p.n != 0:
            continue
        F = solve_F(p.c, params.tol("zero_mean"))
        total += coeff * math.exp(-0.25 * k_norm_sq(j_map(p.D, F, params)))
    return complex(total)


@dataclass(frozen=True)
class GnsVector:
    """A vector element*Omega, optionally with one creation insertion
    element * dstar(creation) * Omega."""

    element: WeylElement
    creation: KVector | None = None

    def sector(self) -> int | None:
        ns = {g.pair.n for _, g in self.element.terms}
        return ns.pop() if len(ns) == 1 else None


def _element_of(x) -> WeylElement:
    if isinstance(x, GnsVector):
        if x.creation is not None:
            raise ValueError("creation insertions go through dstar_gram")
        return x.element
    return x


def gns_inner(A, B, params: Params) -> complex:
    """<A Omega, B Omega> = state(adjoint(A) B)."""
    return state(multiply(adjoint(_element_of(A)), _element_of(B)), params)


@dataclass(frozen=True)
class GramReport:
    matrix: np.ndarray
    min_eig: float
    psd: bool
    tol: float

    def to_json_dict(self) -> dict:
        return {
            "matrix": [
                [[float(z.real), float(z.imag)] for z in row] for row in self.matrix
            ],
            "min_eig": self.min_eig,
            "psd": self.psd,
            "tol": self.tol,
        }


def gram(vectors, params: Params) -> GramReport:
    """Pairwise inner-product matrix with a positive-semidefiniteness report.
    Entries are computed independently (safe to parallelize) and the check
    threshold scales with the matrix norm."""
    elems = [_element_of(v) for v in vectors]
    n = len(elems)
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    vals = pmap(
        lambda ij: gns_inner(elems[ij[0]], elems[ij[1]], params),
        pairs,
        params.effective_threads(),
    )
    M = np.zeros((n, n), dtype=np.complex128)
    for (i, j), v in zip(pairs, vals):
        M[i, j] = v
        M[j, i] = np.conj(v)
    eigs = np.linalg.eigvalsh(0.5 * (M + M.conj().T))
    norm = float(np.max(np.abs(eigs))) if n else 0.0
    tol = params.tol("psd") * norm
    min_eig = float(eigs[0]) if n else 0.0
    return GramReport(M, min_eig, bool(min_eig >= -tol), tol)


# ---------------------------------------------------------------------------
# closed-form oracles for charged vectors with excitations


def _require_model_kappa(params: Params):
    if abs(params.kappa - 2.0 / math.pi) > 1e-12:
        raise ValueError("this identity fixes kappa = 2/pi")


def charged_pair(v, n: int, params: Params) -> SymplecticPair:
    c = coulomb_c(v, params.e, params.lmax) * float(n)
    return SymplecticPair(ConeFunction.zeros(0, params.lmax), c.real_part(), n)


def product_formula_oracle(v, vp, n: int, DF, DFp, params: Params) -> complex:
    """Right-hand side of the factorized product of two charged-and-excited
    cyclic vectors: the two plain inner products times the cross factor
    exp(-i n/(4 sqrt(2 pi^3)) * integral of (c_v' - c_v)(conj(j) + j'))."""
    _require_model_kappa(params)
    D, F = DF
    Dp, Fp = DFp
    Wv = weyl(ConeFunction.zeros(0, params.lmax), charged_pair(v, n, params).c, params.e)
    Wvp = weyl(ConeFunction.zeros(0, params.lmax), charged_pair(vp, n, params).c, params.e)
    f1 = gns_inner(Wv, Wvp, params)
    WD = weyl(D, dsquare(F), params.e)
    WDp = weyl(Dp, dsquare(Fp), params.e)
    f2 = gns_inner(WD, WDp, params)
    dc = coulomb_c(vp, params.e, params.lmax) - coulomb_c(v, params.e, params.lmax)
    j = j_map(D, F, params).G
    jp = j_map(Dp, Fp, params).G
    integ = sh_dot(j, dc) + sh_dot(dc, jp)  # conj(j) and j' against the real dc
    f3 = cmath.exp(-1j * n / (4.0 * math.sqrt(2.0 * math.pi**3)) * integ)
    return f1 * f2 * f3


def dstar_gram(v, vp, n: int, G: KVector, Gp: KVector, params: Params):
    """<W(0, n c_v) dstar(G) Omega, W(0, n c_v') dstar(G') Omega> by two
    routes that must agree.

    Route A builds the quadratic exponent of the two-parameter family
    <W(0,nc_v)W(sD, s dsq F)Omega, W(0,nc_v')W(s'D', s' dsq F')Omega> from
    symplectic and one-excitation products and takes the exact mixed
    derivative at zero (times 2, since the field is (d + dstar)/sqrt(2)).
    Route B multiplies the charged kernel by the one-excitation product
    minus the cross term (n^2/16 pi^3) * I(conj G) * I(G')."""
    _require_model_kappa(params)
    kap = params.kappa
    g = G.G
    gp = Gp.G
    dc = coulomb_c(vp, params.e, params.lmax) - coulomb_c(v, params.e, params.lmax)
    F0 = solve_F(dc, params.tol("zero_mean"))
    kernel = math.exp(-0.25 * kap * n * n * k_norm_sq(F0))

    # route A: decompose G = j(D, F)
    rk = math.sqrt(kap)
    D = rk * g.real_part()
    F = (-1.0 / rk) * g.imag_part()
    Dp = rk * gp.real_part()
    Fp = (-1.0 / rk) * gp.imag_part()
    sig_D = sh_dot(D, dc).real / FOUR_PI
    sig_Dp = sh_dot(Dp, dc).real / FOUR_PI
    a1 = -0.5j * n * sig_D + 0.5 * kap * n * k_inner(F, F0)
    a2 = -0.5j * n * sig_Dp - 0.5 * kap * n * k_inner(Fp, F0)
    a12 = 0.5 * k_inner(g, gp)
    path_a = 2.0 * (a12 + a1 * a2) * kernel

    # route B: the factorized formula with the cross term
    i1 = sh_dot(g, dc)  # integral of dc * conj(G)
    i2 = sh_dot(dc, gp)  # integral of dc * G'
    path_b = kernel * (k_inner(g, gp) - n * n / (16.0 * math.pi**3) * i1 * i2)
    return complex(path_a), complex(path_b)
