"""Homogeneous functions on the future light cone and their calculus.

A function of homogeneity degree d satisfies f(s*l) = s^d f(l) for s > 0 and
is stored through its section f(1, nhat) on the unit sphere as a band-limited
expansion in orthonormal complex spherical harmonics.  Degrees 0 and -2 carry
the model's data; degree -1/-3 appear internally as gradient representatives.

The canonical off-cone extension used for gradients is
f(l) = (l^0)^d * f(1, lvec/|lvec|); its gradient ambiguity is exactly
proportional to l_a and every consumer is invariant under that shift.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DegreeError, NotCoexactError
from .grid import QuadratureGrid, grid_for, laplace_eigs, sh_index

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

FOUR_PI = 4.0 * math.pi


def mdot(a: np.ndarray, b: np.ndarray):
    """Minkowski product with signature (+,-,-,-)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return a[..., 0] * b[..., 0] - np.sum(a[..., 1:] * b[..., 1:], axis=-1)


# ---------------------------------------------------------------------------
# cone functions


@dataclass(frozen=True, eq=False)
class ConeFunction:
    """Band-limited section of a homogeneous function on the future cone."""

    degree: int
    lmax: int
    coeffs: np.ndarray
    real_flag: bool = False

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.shape != ((self.lmax + 1) ** 2,):
            raise ValueError("coefficient vector has the wrong length")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zeros(cls, degree: int, lmax: int, real: bool = True) -> "ConeFunction":
        return cls(degree, lmax, np.zeros((lmax + 1) ** 2, dtype=np.complex128), real)

    @classmethod
    def constant(cls, value: complex, lmax: int, degree: int = 0) -> "ConeFunction":
        c = np.zeros((lmax + 1) ** 2, dtype=np.complex128)
        c[0] = value * math.sqrt(FOUR_PI)
        return cls(degree, lmax, c, real_flag=(abs(complex(value).imag) == 0.0))

    @classmethod
    def from_section(
        cls, values: np.ndarray, grid: QuadratureGrid, degree: int, lmax: int | None = None
    ) -> "ConeFunction":
        lmax = grid.lmax if lmax is None else lmax
        coeffs = grid.analysis(np.asarray(values, dtype=np.complex128))
        if lmax < grid.lmax:
            coeffs = coeffs[: (lmax + 1) ** 2]
        real = bool(np.max(np.abs(np.imag(values))) < 1e-12 * (1.0 + np.max(np.abs(values))))
        if real:
            coeffs = _symmetrize_real(coeffs, lmax)
        return cls(degree, lmax, coeffs, real)

    @classmethod
    def from_callable(cls, fn, degree: int, lmax: int) -> "ConeFunction":
        """fn maps cartesian unit directions (3, ...) to section values."""
        g = grid_for(lmax)
        return cls.from_section(fn(g.unit_vectors()), g, degree)

    # -- basic structure ----------------------------------------------------

    def coeff(self, l: int, m: int) -> complex:
        return complex(self.coeffs[sh_index(l, m)])

    def pad_to(self, lmax: int) -> "ConeFunction":
        if lmax == self.lmax:
            return self
        if lmax < self.lmax:
            raise ValueError("pad_to cannot shrink; use truncated()")
        c = np.zeros((lmax + 1) ** 2, dtype=np.complex128)
        c[: (self.lmax + 1) ** 2] = self.coeffs
        return ConeFunction(self.degree, lmax, c, self.real_flag)

    def truncated(self, lmax: int) -> "ConeFunction":
        if lmax >= self.lmax:
            return self.pad_to(lmax)
        return ConeFunction(
            self.degree, lmax, self.coeffs[: (lmax + 1) ** 2], self.real_flag
        )

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def effective_lmax(self, rel: float = 1e-13) -> int:
        """Smallest band limit whose dropped tail is below rel * norm."""
        total = self.norm()
        if total == 0.0:
            return 0
        tail = 0.0
        for l in range(self.lmax, 0, -1):
            tail = math.hypot(tail, float(np.linalg.norm(self.coeffs[l * l : (l + 1) ** 2])))
            if tail > rel * total:
                return l
        return 0

    def conjugate(self) -> "ConeFunction":
        out = np.empty_like(self.coeffs)
        for l in range(self.lmax + 1):
            ms = np.arange(-l, l + 1)
            out[l * l + l + ms] = (-1.0) ** ms * np.conj(self.coeffs[l * l + l - ms])
        return ConeFunction(self.degree, self.lmax, out, self.real_flag)

    def real_part(self) -> "ConeFunction":
        h = 0.5 * (self.coeffs + self.conjugate().coeffs)
        return ConeFunction(self.degree, self.lmax, h, True)

    def imag_part(self) -> "ConeFunction":
        h = (self.coeffs - self.conjugate().coeffs) / 2j
        return ConeFunction(self.degree, self.lmax, h, True)

    def drop_mean(self) -> "ConeFunction":
        c = self.coeffs.copy()
        c[0] = 0.0
        return ConeFunction(self.degree, self.lmax, c, self.real_flag)

    # -- arithmetic ----------------------------------------------------------

    def _binary(self, other: "ConeFunction", sign: float) -> "ConeFunction":
        if self.degree != other.degree:
            raise DegreeError("cannot add cone functions of different degree")
        lmax = max(self.lmax, other.lmax)
        a = self.pad_to(lmax)
        b = other.pad_to(lmax)
        return ConeFunction(
            self.degree,
            lmax,
            a.coeffs + sign * b.coeffs,
            self.real_flag and other.real_flag,
        )

    def __add__(self, other):
        return self._binary(other, 1.0)

    def __sub__(self, other):
        return self._binary(other, -1.0)

    def __neg__(self):
        return ConeFunction(self.degree, self.lmax, -self.coeffs, self.real_flag)

    def __mul__(self, scalar):
        s = complex(scalar)
        return ConeFunction(
            self.degree,
            self.lmax,
            self.coeffs * s,
            self.real_flag and s.imag == 0.0,
        )

    __rmul__ = __mul__

    # -- evaluation ----------------------------------------------------------

    def section(self, grid: QuadratureGrid | None = None) -> np.ndarray:
        g = grid if grid is not None else grid_for(self.lmax)
        return g.synthesis(self.pad_to(g.lmax).coeffs if g.lmax > self.lmax else self.coeffs)

    def section_at(self, costheta, phi, impl=None) -> np.ndarray:
        return kernels.scatter_eval(self.coeffs, self.lmax, costheta, phi, impl=impl)

    def __call__(self, l: np.ndarray) -> np.ndarray:
        """Evaluate on future-null vectors l of shape (..., 4)."""
        l = np.asarray(l, dtype=np.float64)
        l0 = l[..., 0]
        r = np.sqrt(np.sum(l[..., 1:] ** 2, axis=-1))
        ct = np.clip(l[..., 3] / r, -1.0, 1.0)
        ph = np.arctan2(l[..., 2], l[..., 1])
        vals = self.section_at(np.ravel(ct), np.ravel(ph)).reshape(ct.shape)
        return l0**self.degree * vals

    # -- serialization -------------------------------------------------------

    def to_json_dict(self) -> dict:
        entries = []
        for l in range(self.lmax + 1):
            for m in range(-l, l + 1):
                z = self.coeffs[sh_index(l, m)]
                if z != 0:
                    entries.append([l, m, float(z.real), float(z.imag)])
        return {"degree": self.degree, "lmax": self.lmax, "coeffs": entries}

    @classmethod
    def from_json_dict(cls, d: dict) -> "ConeFunction":
        degree = int(d["degree"])
        lmax = int(d["lmax"])
        coeffs = np.zeros((lmax + 1) ** 2, dtype=np.complex128)
        for entry in d["coeffs"]:
            l, m, re, im = int(entry[0]), int(entry[1]), float(entry[2]), float(entry[3])
            if l > lmax or abs(m) > l or l < 0:
                raise ValueError(f"coefficient ({l},{m}) outside the stated band limit")
            coeffs[sh_index(l, m)] = re + 1j * im
        sym = _symmetrize_real(coeffs, lmax)
        real = bool(np.allclose(sym, coeffs, atol=1e-12 * (1 + np.max(np.abs(coeffs)))))
        return cls(degree, lmax, coeffs, real)

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def loads(cls, s: str) -> "ConeFunction":
        return cls.from_json_dict(json.loads(s))


def _symmetrize_real(coeffs: np.ndarray, lmax: int) -> np.ndarray:
    out = np.empty_like(coeffs)
    for l in range(lmax + 1):
        ms = np.arange(-l, l + 1)
        out[l * l + l + ms] = 0.5 * (
            coeffs[l * l + l + ms] + (-1.0) ** ms * np.conj(coeffs[l * l + l - ms])
        )
    return out


def allclose(a: ConeFunction, b: ConeFunction, atol: float = 1e-12) -> bool:
    lmax = max(a.lmax, b.lmax)
    return a.degree == b.degree and bool(
        np.allclose(a.pad_to(lmax).coeffs, b.pad_to(lmax).coeffs, atol=atol)
    )


def sh_dot(a: ConeFunction, b: ConeFunction) -> complex:
    """Parseval form of integral over S^2 of conj(a) * b."""
    lmax = max(a.lmax, b.lmax)
    return complex(np.vdot(a.pad_to(lmax).coeffs, b.pad_to(lmax).coeffs))


def product(a: ConeFunction, b: ConeFunction, out_lmax: int | None = None) -> ConeFunction:
    """Pointwise product; exact when out_lmax >= a.lmax + b.lmax."""
    out_lmax = out_lmax if out_lmax is not None else a.lmax + b.lmax
    g = grid_for(out_lmax)
    vals = a.pad_to(out_lmax).section(g) * b.pad_to(out_lmax).section(g)
    return ConeFunction.from_section(vals, g, a.degree + b.degree)


# ---------------------------------------------------------------------------
# Minkowski geometry


@dataclass(frozen=True)
class LorentzTransform:
    """Restricted (proper orthochronous) Lorentz matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.shape != (4, 4):
            raise ValueError("Lorentz matrix must be 4x4")
        if np.max(np.abs(m.T @ METRIC @ m - METRIC)) > 1e-10:
            raise ValueError("matrix does not preserve the metric")
        if not (np.linalg.det(m) > 0 and m[0, 0] >= 1.0 - 1e-12):
            raise ValueError("matrix is not in the restricted group")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls) -> "LorentzTransform":
        return cls(np.eye(4))

    @classmethod
    def boost(cls, rapidity: float, axis) -> "LorentzTransform":
        n = np.asarray(axis, dtype=np.float64)
        n = n / np.linalg.norm(n)
        ch, sh = math.cosh(rapidity), math.sinh(rapidity)
        m = np.eye(4)
        m[0, 0] = ch
        m[0, 1:] = sh * n
        m[1:, 0] = sh * n
        m[1:, 1:] = np.eye(3) + (ch - 1.0) * np.outer(n, n)
        return cls(m)

    @classmethod
    def rotation(cls, angle: float, axis) -> "LorentzTransform":
        n = np.asarray(axis, dtype=np.float64)
        n = n / np.linalg.norm(n)
        K = np.array([[0, -n[2], n[1]], [n[2], 0, -n[0]], [-n[1], n[0], 0]])
        R = np.eye(3) + math.sin(angle) * K + (1 - math.cos(angle)) * (K @ K)
        m = np.eye(4)
        m[1:, 1:] = R
        return cls(m)

    def __matmul__(self, other: "LorentzTransform") -> "LorentzTransform":
        return LorentzTransform(self.matrix @ other.matrix)

    def inverse(self) -> "LorentzTransform":
        return LorentzTransform(METRIC @ self.matrix.T @ METRIC)

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(v, dtype=np.float64)


@dataclass(frozen=True)
class HyperboloidPoint:
    """Future unit-hyperboloid point: v.v = 1, v^0 > 0."""

    vec: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vec, dtype=np.float64)
        if v.shape != (4,):
            raise ValueError("hyperboloid point must be a 4-vector")
        if abs(mdot(v, v) - 1.0) > 1e-10 or v[0] <= 0:
            raise ValueError("vector is not on the future unit hyperboloid")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "vec", v)

    @classmethod
    def rest(cls) -> "HyperboloidPoint":
        return cls(np.array([1.0, 0.0, 0.0, 0.0]))

    @classmethod
    def boosted(cls, rapidity: float, axis) -> "HyperboloidPoint":
        n = np.asarray(axis, dtype=np.float64)
        n = n / np.linalg.norm(n)
        return cls(np.concatenate([[math.cosh(rapidity)], math.sinh(rapidity) * n]))

    def transform(self, L: LorentzTransform) -> "HyperboloidPoint":
        return HyperboloidPoint(L.apply(self.vec))

    def dot_sections(self, grid: QuadratureGrid) -> np.ndarray:
        """Section of v.l = v^0 - vvec.nhat on the grid nodes."""
        n = grid.unit_vectors()
        return self.vec[0] - np.einsum("i,i...->...", self.vec[1:], n)


def rapidity_between(v: HyperboloidPoint, u: HyperboloidPoint) -> float:
    return float(np.arccosh(max(1.0, mdot(v.vec, u.vec))))


# ---------------------------------------------------------------------------
# calculus operations


def integrate_invariant(c: ConeFunction, method: str = "parseval"):
    """Invariant integral of a degree -2 function over the cone's sphere
    section.  Both evaluation paths agree to machine accuracy."""
    if c.degree != -2:
        raise DegreeError(f"invariant integral needs degree -2, got {c.degree}")
    if method == "parseval":
        val = math.sqrt(FOUR_PI) * c.coeffs[0]
    elif method == "quadrature":
        g = grid_for(c.lmax)
        val = g.integrate(c.section(g))
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(val.real) if c.real_flag else complex(val)


def dsquare(f: ConeFunction) -> ConeFunction:
    """Wave operator of the degree-0 extension, restricted to the cone:
    coefficient-wise multiplication by +l(l+1); the sign is pinned by
    positivity of the one-excitation inner product."""
    if f.degree != 0:
        raise DegreeError(f"dsquare needs degree 0, got {f.degree}")
    return ConeFunction(-2, f.lmax, f.coeffs * laplace_eigs(f.lmax), f.real_flag)


def solve_F(c: ConeFunction, tol_zero_mean: float = 1e-10) -> ConeFunction:
    """Potential F with dsquare(F) = c, fixed by a vanishing mean.  Raises
    NotCoexactError when the invariant integral of c is not negligible."""
    if c.degree != -2:
        raise DegreeError(f"solve_F needs degree -2, got {c.degree}")
    mean = integrate_invariant(c)
    tol = tol_zero_mean * (c.norm() + 1e-300)
    if abs(mean) > tol:
        raise NotCoexactError(mean, tol)
    eigs = laplace_eigs(c.lmax)
    out = np.zeros_like(c.coeffs)
    out[1:] = c.coeffs[1:] / eigs[1:]
    return ConeFunction(0, c.lmax, out, c.real_flag)


def gradient_sections(f: ConeFunction, grid: QuadratureGrid) -> np.ndarray:
    """The four section functions of the canonical gradient d_a f, lower
    index a, shape (4, n_theta, n_phi).  Component 0 is degree*f; spatial
    components are the tangential surface gradient."""
    val, dth, dph = grid.synthesis_grad(f.pad_to(grid.lmax).coeffs)
    ct = grid.costheta[:, None]
    st = np.sqrt(np.clip(1.0 - grid.costheta**2, 0.0, None))[:, None]
    cp = np.cos(grid.phi)[None, :]
    sp = np.sin(grid.phi)[None, :]
    gx = ct * cp * dth - sp * dph
    gy = ct * sp * dth + cp * dph
    gz = -st * dth
    return np.stack([f.degree * val, gx, gy, gz])


def gradient_scatter(f: ConeFunction, costheta, phi, impl=None) -> np.ndarray:
    """Canonical-gradient sections at scattered directions, shape (4, npts)."""
    val, dth, dph = kernels.scatter_eval_grad(f.coeffs, f.lmax, costheta, phi, impl=impl)
    ct = np.asarray(costheta)
    st = np.sqrt(np.clip(1.0 - ct**2, 0.0, None))
    cp = np.cos(phi)
    sp = np.sin(phi)
    gx = ct * cp * dth - sp * dph
    gy = ct * sp * dth + cp * dph
    gz = -st * dth
    return np.stack([f.degree * val, gx, gy, gz])


def cone_gradient(f: ConeFunction) -> tuple[ConeFunction, ...]:
    """Representative gradient d_a f (lower index) as four cone functions of
    degree f.degree - 1, band-limited at lmax + 1.  Consumers must be
    invariant under d_a f -> d_a f + s(l) l_a."""
    g = grid_for(f.lmax + 1)
    secs = gradient_sections(f, g)
    return tuple(
        ConeFunction.from_section(secs[a], g, f.degree - 1) for a in range(4)
    )


def lorentz_generator(f: ConeFunction, plane: tuple[int, int]) -> ConeFunction:
    """Generator L_ab f = l_a d_b f - l_b d_a f for the plane (a, b); the
    gauge ambiguity of the gradient cancels exactly.  Result has the same
    degree and band limit lmax + 1."""
    a, b = plane
    g = grid_for(f.lmax + 1)
    secs = gradient_sections(f, g)
    n = g.unit_vectors()
    llow = np.empty((4,) + n.shape[1:])
    llow[0] = 1.0
    llow[1:] = -n
    vals = llow[a] * secs[b] - llow[b] * secs[a]
    return ConeFunction.from_section(vals, g, f.degree)


def lorentz_pullback(f: ConeFunction, L: LorentzTransform) -> ConeFunction:
    """Pullback [T f](l) = f(L^{-1} l), sampled on the oversized grid and
    projected back to f.lmax.  The residual band-limit error grows with the
    boost rapidity; see the package README for the measured profile."""
    g = grid_for(f.lmax)
    n = g.unit_vectors()
    l = np.empty((4,) + n.shape[1:])
    l[0] = 1.0
    l[1:] = n
    lp = np.einsum("ab,b...->a...", L.inverse().matrix, l)
    omega = lp[0]
    r = np.sqrt(np.sum(lp[1:] ** 2, axis=0))
    ct = np.clip(lp[3] / r, -1.0, 1.0)
    ph = np.arctan2(lp[2], lp[1])
    vals = f.section_at(np.ravel(ct), np.ravel(ph)).reshape(ct.shape)
    vals = omega**f.degree * vals
    if f.real_flag:
        vals = np.real(vals)
    return ConeFunction.from_section(vals, g, f.degree)


def coulomb_c(v: HyperboloidPoint, e: float = 1.0, lmax: int = 48) -> ConeFunction:
    """The boosted point-charge section e / (v.l)^2, degree -2, charge 1."""
    g = grid_for(lmax)
    vals = e / v.dot_sections(g) ** 2
    return ConeFunction.from_section(vals, g, -2)


def log_F(v: HyperboloidPoint, u: HyperboloidPoint, e: float = 1.0, lmax: int = 48) -> ConeFunction:
    """The degree-0 potential e*log((v.l)/(u.l)) with
    dsquare(log_F(v, u)) = coulomb_c(u) - coulomb_c(v)."""
    g = grid_for(lmax)
    vals = e * np.log(v.dot_sections(g) / u.dot_sections(g))
    return ConeFunction.from_section(vals, g, 0)
