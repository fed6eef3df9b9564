"""Spacetime evaluation of the degree-0 phase field, the asymptotic Maxwell
field it generates, and the flux-charge identity.

The phase-field integrand carries a sign kernel and a logarithmic kernel;
for spacelike points both are handled by quadrature on two spherical caps
split along the circle x.l = 0 (the sign kernel is smooth per cap, the log
kernel gets geometrically graded panels toward the circle).  Near-cone
points are refused rather than regularized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cone import (
    ConeFunction,
    FOUR_PI,
    HyperboloidPoint,
    METRIC,
    coulomb_c,
    dsquare,
    gradient_scatter,
    gradient_sections,
    grid_for,
    integrate_invariant,
    mdot,
    sh_dot,
)
from .errors import ConeProximityError, ConeWeylError
from .lorentz import PLANES, AntisymTensor
from .params import Params, pmap
from .weyl import SymplecticPair


@dataclass(frozen=True)
class SpacetimePoint:
    x: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        if x.shape != (4,):
            raise ValueError("spacetime point must be a 4-vector")
        x = x.copy()
        x.setflags(write=False)
        object.__setattr__(self, "x", x)

    def interval(self) -> float:
        return float(mdot(self.x, self.x))

    def classify(self, cone_margin: float = 0.05) -> str:
        n2 = float(np.dot(self.x, self.x))
        if n2 == 0.0 or abs(self.interval()) < cone_margin * n2:
            return "near-cone"
        if self.interval() > 0:
            return "timelike-future" if self.x[0] > 0 else "timelike-past"
        return "spacelike"


def _as_point(x) -> SpacetimePoint:
    return x if isinstance(x, SpacetimePoint) else SpacetimePoint(np.asarray(x, float))


def _rotation_to_pole(xvec: np.ndarray) -> np.ndarray:
    """3x3 rotation R with R @ xhat = zhat."""
    xhat = xvec / np.linalg.norm(xvec)
    z = np.array([0.0, 0.0, 1.0])
    v = np.cross(xhat, z)
    s = np.linalg.norm(v)
    c = float(np.dot(xhat, z))
    if s < 1e-14:
        return np.eye(3) if c > 0 else np.diag([1.0, -1.0, -1.0])
    K = np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]]) / s
    return np.eye(3) + s * K + (1 - c) * (K @ K)


def _cap_panels(lo: float, hi: float, toward: str, depth: float, plain: bool):
    """Panel edges on [lo, hi]; graded geometrically toward one endpoint."""
    if plain:
        return [(lo, hi)]
    span = hi - lo
    edges = [0.0]
    h = depth * span
    while h < span:
        edges.append(h)
        h *= 2.0
    edges.append(span)
    edges = np.unique(np.clip(edges, 0.0, span))
    panels = [(edges[i], edges[i + 1]) for i in range(len(edges) - 1)]
    if toward == "hi":
        return [(hi - b, hi - a) for a, b in reversed(panels)]
    return [(lo + a, lo + b) for a, b in panels]


@lru_cache(maxsize=64)
def _leggauss(n: int):
    return np.polynomial.legendre.leggauss(n)


def _cap_nodes(u0: float, n_u: int, n_phi: int, graded: bool, depth: float = 1e-10):
    """Quadrature nodes over both caps of the split sphere, as flat arrays
    (u, phi, w) in the rotated frame whose pole carries the split circle."""
    xg, wg = _leggauss(n_u)
    us, ws = [], []
    for lo, hi, toward in ((-1.0, u0, "hi"), (u0, 1.0, "lo")):
        for a, b in _cap_panels(lo, hi, toward, depth, plain=not graded):
            mid, half = 0.5 * (a + b), 0.5 * (b - a)
            us.append(mid + half * xg)
            ws.append(half * wg)
    u = np.concatenate(us)
    w = np.concatenate(ws)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    uu = np.repeat(u, n_phi)
    pp = np.tile(phi, len(u))
    ww = np.repeat(w, n_phi) * (2.0 * np.pi / n_phi)
    return uu, pp, ww


def _to_frame(R: np.ndarray, u: np.ndarray, phi: np.ndarray):
    """Rotated-frame nodes -> original-frame (costheta, phi) direction angles
    plus the cartesian components, via nhat = R^T nhat'."""
    s = np.sqrt(np.clip(1.0 - u * u, 0.0, None))
    nprime = np.stack([s * np.cos(phi), s * np.sin(phi), u])
    n = R.T @ nprime
    ct = np.clip(n[2], -1.0, 1.0)
    ph = np.arctan2(n[1], n[0])
    return ct, ph, n


class PhaseField:
    """Prepared evaluator of the degree-0 wave-equation field of a pair:

        S(x) = -(e/4pi) [ I(c * sgn(x.l)) + I(dsq D * log(|x.l| / v.l)) ] + S_v,
        S_v  = (e/4pi) I(D / (v.l)^2),

    independent of the reference v.  The x-independent pieces (S_v, the
    effective band limits, the charge integral) are computed once so that
    finite-difference ladders and sphere sweeps stay cheap.  Near-cone
    points are refused."""

    def __init__(self, p: SymplecticPair, v: HyperboloidPoint, params: Params):
        self.params = params
        self.v = v
        self.e = params.e
        self.s_v = self.e / FOUR_PI * sh_dot(p.D, coulomb_c(v, 1.0, p.D.lmax)).real
        self.c = p.c.truncated(p.c.effective_lmax())
        self.have_c = self.c.norm() > 0.0
        self.c_integral = integrate_invariant(p.c) if self.have_c else 0.0
        d2d = dsquare(p.D)
        self.d2d = d2d.truncated(d2d.effective_lmax())
        self.have_d = self.d2d.norm() > 0.0

    def __call__(self, x) -> float:
        pt = _as_point(x)
        kind = pt.classify(self.params.cone_margin)
        if kind == "near-cone":
            raise ConeProximityError(pt.x, self.params.cone_margin)
        v = self.v
        if kind.startswith("timelike"):
            sgn = 1.0 if kind == "timelike-future" else -1.0
            total = sgn * self.c_integral
            if self.have_d:
                g = grid_for(max(self.d2d.lmax, 8))
                n = g.unit_vectors()
                xl = pt.x[0] - np.einsum("i,i...->...", pt.x[1:], n)
                vl = v.dot_sections(g)
                total += g.integrate(self.d2d.section(g) * np.log(np.abs(xl) / vl)).real
            return float(-self.e / FOUR_PI * total + self.s_v)

        r = float(np.linalg.norm(pt.x[1:]))
        u0 = pt.x[0] / r
        R = _rotation_to_pole(pt.x[1:])
        total = 0.0
        if self.have_c:
            lc = self.c.lmax
            u, ph, w = _cap_nodes(u0, lc + 8, 2 * lc + 8, graded=False)
            ct, phi0, _ = _to_frame(R, u, ph)
            cv = self.c.section_at(ct, phi0)
            sgn = np.where(u < u0, 1.0, -1.0)
            total += float(np.sum(w * cv.real * sgn))
        if self.have_d:
            ld = self.d2d.lmax
            u, ph, w = _cap_nodes(u0, 12, 2 * ld + 8, graded=True)
            ct, phi0, n = _to_frame(R, u, ph)
            dv = self.d2d.section_at(ct, phi0).real
            xl = pt.x[0] - r * u
            vl = v.vec[0] - np.einsum("i,i...->...", v.vec[1:], n)
            total += float(np.sum(w * dv * np.log(np.abs(xl) / vl)))
        return float(-self.e / FOUR_PI * total + self.s_v)


def eval_phase_field(x, p: SymplecticPair, v: HyperboloidPoint, params: Params) -> float:
    return PhaseField(p, v, params)(x)


def phase_gradient(x, p, v: HyperboloidPoint, params: Params) -> np.ndarray:
    """d S / d x^b by Richardson-extrapolated central differences."""
    field = p if isinstance(p, PhaseField) else PhaseField(p, v, params)
    pt = _as_point(x)
    h = 1e-4 * float(np.linalg.norm(pt.x))
    grad = np.empty(4)
    for b in range(4):
        eb = np.zeros(4)
        eb[b] = 1.0

        def d(step):
            return (field(pt.x + step * eb) - field(pt.x - step * eb)) / (2.0 * step)

        grad[b] = (4.0 * d(h / 2) - d(h)) / 3.0
    return grad


def eval_em_field_general(x, p, v: HyperboloidPoint, params: Params) -> AntisymTensor:
    """F_ab = (x_a dS/dx^b - x_b dS/dx^a) / (e x^2), from the phase field."""
    pt = _as_point(x)
    if pt.classify(params.cone_margin) == "near-cone":
        raise ConeProximityError(pt.x, params.cone_margin)
    grad = phase_gradient(pt, p, v, params)
    xlow = METRIC @ pt.x
    xsq = pt.interval()
    comp = (np.outer(xlow, grad) - np.outer(grad, xlow)) / (params.e * xsq)
    return AntisymTensor(comp)


@dataclass(frozen=True)
class ExtrapolatedField:
    tensor: AntisymTensor
    ladder: tuple
    spread: float
    converged: bool


def _boundary_nodes(pt: SpacetimePoint, lmax: int, node_scale: float):
    """Quadrature node set for the boundary-value integrand; for spacelike
    points panels are graded toward the circle x.l = 0 down to node_scale."""
    if pt.interval() > 0:
        g = grid_for(lmax + 1)
        n = g.unit_vectors()
        ct = np.repeat(g.costheta, g.n_phi)
        ph = np.tile(g.phi, g.n_theta)
        w = g.weights.ravel()
        nn = n.reshape(3, -1)
        return ct, ph, w, nn
    r = float(np.linalg.norm(pt.x[1:]))
    u0 = pt.x[0] / r
    R = _rotation_to_pole(pt.x[1:])
    depth = max(node_scale / (8.0 * max(r, 1e-300)), 1e-12)
    u, ph, w = _cap_nodes(u0, 12, 2 * lmax + 8, graded=True, depth=depth)
    ct, phi0, n = _to_frame(R, u, ph)
    return ct, phi0, w, n


def field_boundary_term(x, D: ConeFunction, F: ConeFunction, delta: complex, params: Params,
                        node_scale: float | None = None) -> np.ndarray:
    """The 4x4 complex array (1/8pi) I( L_ab[D - i(2/pi)F] / (x.l - i delta)^2 )
    without its conjugate; the boundary value of an analytic function of
    delta in the right half plane."""
    pt = _as_point(x)
    A = D + (-2j / math.pi) * F
    A = A.truncated(max(1, A.effective_lmax()))
    ct, ph, w, n = _boundary_nodes(pt, A.lmax, node_scale if node_scale is not None else abs(delta))
    grads = gradient_scatter(A, ct, ph)
    llow = np.empty((4,) + ct.shape, dtype=np.complex128)
    llow[0] = 1.0
    llow[1:] = -n
    xl = pt.x[0] - np.einsum("i,i...->...", pt.x[1:], n)
    kern = w / (xl - 1j * delta) ** 2
    out = np.zeros((4, 4), dtype=np.complex128)
    for a, b in PLANES:
        lab = llow[a] * grads[b] - llow[b] * grads[a]
        val = np.sum(kern * lab) / (8.0 * math.pi)
        out[a, b] = val
        out[b, a] = -val
    return out


def eval_em_field_regular(x, D: ConeFunction, F: ConeFunction, params: Params) -> ExtrapolatedField:
    """The asymptotic field of electric type for zero-charge data, via the
    boundary-value formula at x - i delta u with a delta ladder
    (1e-2, 5e-3, 2.5e-3) * |x| and two-step Richardson extrapolation."""
    pt = _as_point(x)
    norm = float(np.linalg.norm(pt.x))
    deltas = (1e-2 * norm, 5e-3 * norm, 2.5e-3 * norm)
    terms = [
        field_boundary_term(pt, D, F, d, params, node_scale=deltas[-1]) for d in deltas
    ]
    ladder = [t + np.conj(t) for t in terms]
    r1a = 2.0 * ladder[1] - ladder[0]
    r1b = 2.0 * ladder[2] - ladder[1]
    r2 = (4.0 * r1b - r1a) / 3.0
    spread = float(np.max(np.abs(r1b - r1a)))
    scale = float(np.max(np.abs(r2))) + 1e-300
    converged = spread <= max(1e-3 * scale, 1e-12)
    return ExtrapolatedField(
        AntisymTensor(np.real(r2)),
        tuple(np.real(l) for l in ladder),
        spread,
        converged,
    )


def flux_charge(p: SymplecticPair, R: float, t: float, params: Params,
                v: HyperboloidPoint | None = None, n_sphere: tuple[int, int] = (8, 16)) -> float:
    """(1/4pi) * flux of the electric field through the sphere of radius R at
    time t; equals charge_index * e for admissible (R, t)."""
    if not R > abs(t):
        raise ConeWeylError(f"sphere radius {R} must exceed |t| = {abs(t)}")
    v = v if v is not None else HyperboloidPoint.rest()
    field = PhaseField(p, v, params)
    nt, nphi = n_sphere
    xg, wg = _leggauss(nt)
    phis = 2.0 * np.pi * np.arange(nphi) / nphi
    dirs = []
    ws = []
    for ui, wi in zip(xg, wg):
        s = math.sqrt(max(0.0, 1.0 - ui * ui))
        for ph in phis:
            dirs.append(np.array([s * math.cos(ph), s * math.sin(ph), ui]))
            ws.append(wi * 2.0 * np.pi / nphi)

    def one(iw):
        m, w = iw
        x = np.concatenate([[t], R * m])
        E = eval_em_field_general(x, field, v, params).electric()
        return w * R * R * float(np.dot(E, m))

    vals = pmap(one, list(zip(dirs, ws)), params.effective_threads())
    return float(sum(vals) / FOUR_PI)
