"""Numeric hot paths: normalized associated Legendre recurrences and
evaluation of band-limited spherical-harmonic expansions at scattered
directions.

Every kernel has two interchangeable backends: a numba-compiled loop and a
chunked pure-numpy path.  The default backend is chosen at import time; set
``CONEWEYL_KERNELS=numpy`` to force the fallback, ``CONEWEYL_KERNELS=numba``
to require the compiled path.  Each entry point also accepts ``impl=`` so
benchmarks and tests can pin a backend per call.

Conventions: orthonormal complex spherical harmonics with Condon-Shortley
phase, Y_lm(theta, phi) = Plm(cos theta) e^{i m phi}, where Plm is the
normalized theta-part.  Tables are packed triangularly for m >= 0 with
index tri(l, m) = l(l+1)/2 + m.
"""

from __future__ import annotations

import math
import os
from functools import lru_cache

import numpy as np

_ISQ4PI = 0.5 / math.sqrt(math.pi)

_ENV = os.environ.get("CONEWEYL_KERNELS", "").strip().lower()
if _ENV not in ("", "numba", "numpy"):
    raise RuntimeError(f"CONEWEYL_KERNELS must be 'numba' or 'numpy', got {_ENV!r}")

if _ENV == "numpy":
    _HAVE_NUMBA = False
else:
    try:
        import numba

        _HAVE_NUMBA = True
    except ImportError:
        if _ENV == "numba":
            raise
        _HAVE_NUMBA = False

DEFAULT_IMPL = "numba" if _HAVE_NUMBA else "numpy"


def backend_name() -> str:
    return DEFAULT_IMPL


def tri_size(lmax: int) -> int:
    return (lmax + 1) * (lmax + 2) // 2


def tri_index(l: int, m: int) -> int:
    return l * (l + 1) // 2 + m


@lru_cache(maxsize=64)
def _rec_tables(lmax: int):
    """Recurrence coefficients for the normalized Legendre functions.

    c_mm: seed step (m-1,m-1) -> (m,m); c_ml: step (m,m) -> (m+1,m);
    ra/rb: three-term recurrence in l at fixed m, packed like the tables.
    """
    n = tri_size(lmax)
    c_mm = np.zeros(lmax + 1)
    c_ml = np.zeros(lmax + 1)
    ra = np.zeros(n)
    rb = np.zeros(n)
    for m in range(1, lmax + 1):
        c_mm[m] = -math.sqrt((2 * m + 1) / (2 * m))
    for m in range(0, lmax + 1):
        c_ml[m] = math.sqrt(2 * m + 3)
        for l in range(m + 2, lmax + 1):
            k = tri_index(l, m)
            ra[k] = math.sqrt((2 * l - 1) * (2 * l + 1) / ((l - m) * (l + m)))
            rb[k] = math.sqrt(
                (2 * l + 1) * (l - 1 - m) * (l - 1 + m) / ((2 * l - 3) * (l - m) * (l + m))
            )
    return c_mm, c_ml, ra, rb


@lru_cache(maxsize=64)
def _dtheta_tables(lmax: int):
    """Ladder coefficients for d/dtheta: A = sqrt((l-m)(l+m+1)), B = sqrt((l+m)(l-m+1))."""
    n = tri_size(lmax)
    A = np.zeros(n)
    B = np.zeros(n)
    for m in range(0, lmax + 1):
        for l in range(m, lmax + 1):
            k = tri_index(l, m)
            A[k] = math.sqrt((l - m) * (l + m + 1))
            B[k] = math.sqrt((l + m) * (l - m + 1))
    return A, B


@lru_cache(maxsize=64)
def _m_slices(lmax: int):
    """Packed-index arrays per m, for vectorized per-m contractions."""
    return tuple(
        np.array([tri_index(l, m) for l in range(m, lmax + 1)], dtype=np.int64)
        for m in range(lmax + 1)
    )


def _resolve(impl):
    if impl is None:
        return DEFAULT_IMPL
    if impl not in ("numba", "numpy"):
        raise ValueError(f"unknown kernel impl {impl!r}")
    if impl == "numba" and not _HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is unavailable")
    return impl


# ---------------------------------------------------------------------------
# pure numpy backend

def _legendre_table_np(lmax, x):
    x = np.asarray(x, dtype=np.float64)
    nx = x.shape[0]
    out = np.empty((nx, tri_size(lmax)))
    c_mm, c_ml, ra, rb = _rec_tables(lmax)
    s = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    out[:, 0] = _ISQ4PI
    for m in range(1, lmax + 1):
        out[:, tri_index(m, m)] = c_mm[m] * s * out[:, tri_index(m - 1, m - 1)]
    for m in range(0, lmax):
        out[:, tri_index(m + 1, m)] = c_ml[m] * x * out[:, tri_index(m, m)]
    for m in range(0, lmax + 1):
        for l in range(m + 2, lmax + 1):
            k = tri_index(l, m)
            out[:, k] = ra[k] * x * out[:, tri_index(l - 1, m)] - rb[k] * out[
                :, tri_index(l - 2, m)
            ]
    return out


def _scatter_np(cpos, cneg, lmax, ct, ph, chunk=2048):
    npts = ct.shape[0]
    out = np.empty(npts, dtype=np.complex128)
    slices = _m_slices(lmax)
    for s0 in range(0, npts, chunk):
        sl = slice(s0, min(s0 + chunk, npts))
        P = _legendre_table_np(lmax, ct[sl])
        acc = P[:, slices[0]] @ cpos[slices[0]]
        for m in range(1, lmax + 1):
            idx = slices[m]
            em = np.exp(1j * m * ph[sl])
            acc = acc + (P[:, idx] @ cpos[idx]) * em + (P[:, idx] @ cneg[idx]) * em.conj()
        out[sl] = acc
    return out


def _scatter_grad_np(cpos, cneg, lmax, ct, ph, chunk=2048):
    npts = ct.shape[0]
    val = np.empty(npts, dtype=np.complex128)
    dth = np.empty(npts, dtype=np.complex128)
    dps = np.empty(npts, dtype=np.complex128)
    slices = _m_slices(lmax)
    A, B = _dtheta_tables(lmax)
    for s0 in range(0, npts, chunk):
        sl = slice(s0, min(s0 + chunk, npts))
        P = _legendre_table_np(lmax, ct[sl])
        dP = legendre_dtheta(lmax, P)
        sin = np.sqrt(np.clip(1.0 - ct[sl] ** 2, 1e-300, None))
        acc = P[:, slices[0]] @ cpos[slices[0]]
        acct = dP[:, slices[0]] @ cpos[slices[0]]
        accp = np.zeros(P.shape[0], dtype=np.complex128)
        for m in range(1, lmax + 1):
            idx = slices[m]
            em = np.exp(1j * m * ph[sl])
            ap = P[:, idx] @ cpos[idx]
            bp = P[:, idx] @ cneg[idx]
            at = dP[:, idx] @ cpos[idx]
            bt = dP[:, idx] @ cneg[idx]
            acc = acc + ap * em + bp * em.conj()
            acct = acct + at * em + bt * em.conj()
            accp = accp + 1j * m * (ap * em - bp * em.conj()) / sin
        val[sl] = acc
        dth[sl] = acct
        dps[sl] = accp
    return val, dth, dps


def legendre_dtheta(lmax: int, P: np.ndarray) -> np.ndarray:
    """d/dtheta table assembled from a P table via the ladder identity
    dPlm/dtheta = (A Pl,m+1 - B Pl,m-1)/2, with Pl,-1 = -Pl,1."""
    A, B = _dtheta_tables(lmax)
    out = np.zeros_like(P)
    for m in range(0, lmax + 1):
        for l in range(max(m, 1), lmax + 1):
            k = tri_index(l, m)
            up = P[:, tri_index(l, m + 1)] if m + 1 <= l else 0.0
            if m >= 1:
                dn = P[:, tri_index(l, m - 1)]
            else:
                dn = -P[:, tri_index(l, 1)] if l >= 1 else 0.0
            out[:, k] = 0.5 * (A[k] * up - B[k] * dn)
    return out


# ---------------------------------------------------------------------------
# numba backend

if _HAVE_NUMBA:
    import cmath

    from numba import njit

    @njit(cache=True)
    def _fill_p(p, lmax, xi, si, c_mm, c_ml, ra, rb):
        p[0] = _ISQ4PI
        for m in range(1, lmax + 1):
            p[m * (m + 1) // 2 + m] = c_mm[m] * si * p[(m - 1) * m // 2 + m - 1]
        for m in range(0, lmax):
            p[(m + 1) * (m + 2) // 2 + m] = c_ml[m] * xi * p[m * (m + 1) // 2 + m]
        for m in range(0, lmax + 1):
            for l in range(m + 2, lmax + 1):
                k = l * (l + 1) // 2 + m
                p[k] = ra[k] * xi * p[(l - 1) * l // 2 + m] - rb[k] * p[(l - 2) * (l - 1) // 2 + m]

    @njit(cache=True)
    def _legendre_table_nb(lmax, x, c_mm, c_ml, ra, rb):
        nx = x.shape[0]
        ncoef = (lmax + 1) * (lmax + 2) // 2
        out = np.empty((nx, ncoef))
        for i in range(nx):
            xi = x[i]
            si = math.sqrt(max(0.0, 1.0 - xi * xi))
            _fill_p(out[i], lmax, xi, si, c_mm, c_ml, ra, rb)
        return out

    @njit(cache=True)
    def _scatter_nb(cpos, cneg, lmax, ct, ph, c_mm, c_ml, ra, rb):
        npts = ct.shape[0]
        ncoef = (lmax + 1) * (lmax + 2) // 2
        out = np.empty(npts, np.complex128)
        p = np.empty(ncoef)
        for i in range(npts):
            xi = ct[i]
            si = math.sqrt(max(0.0, 1.0 - xi * xi))
            _fill_p(p, lmax, xi, si, c_mm, c_ml, ra, rb)
            acc = 0.0 + 0.0j
            for l in range(0, lmax + 1):
                acc += p[l * (l + 1) // 2] * cpos[l * (l + 1) // 2]
            for m in range(1, lmax + 1):
                em = cmath.exp(1j * m * ph[i])
                am = 0.0 + 0.0j
                bm = 0.0 + 0.0j
                for l in range(m, lmax + 1):
                    k = l * (l + 1) // 2 + m
                    am += p[k] * cpos[k]
                    bm += p[k] * cneg[k]
                acc += am * em + bm * em.conjugate()
            out[i] = acc
        return out

    @njit(cache=True)
    def _scatter_grad_nb(cpos, cneg, lmax, ct, ph, c_mm, c_ml, ra, rb, dA, dB):
        npts = ct.shape[0]
        ncoef = (lmax + 1) * (lmax + 2) // 2
        val = np.empty(npts, np.complex128)
        dth = np.empty(npts, np.complex128)
        dps = np.empty(npts, np.complex128)
        p = np.empty(ncoef)
        dp = np.empty(ncoef)
        for i in range(npts):
            xi = ct[i]
            si = math.sqrt(max(1e-300, 1.0 - xi * xi))
            _fill_p(p, lmax, xi, si, c_mm, c_ml, ra, rb)
            for m in range(0, lmax + 1):
                for l in range(m, lmax + 1):
                    k = l * (l + 1) // 2 + m
                    up = p[l * (l + 1) // 2 + m + 1] if m + 1 <= l else 0.0
                    if m >= 1:
                        dn = p[l * (l + 1) // 2 + m - 1]
                    elif l >= 1:
                        dn = -p[l * (l + 1) // 2 + 1]
                    else:
                        dn = 0.0
                    dp[k] = 0.5 * (dA[k] * up - dB[k] * dn)
            acc = 0.0 + 0.0j
            acct = 0.0 + 0.0j
            accp = 0.0 + 0.0j
            for l in range(0, lmax + 1):
                acc += p[l * (l + 1) // 2] * cpos[l * (l + 1) // 2]
                acct += dp[l * (l + 1) // 2] * cpos[l * (l + 1) // 2]
            for m in range(1, lmax + 1):
                em = cmath.exp(1j * m * ph[i])
                am = 0.0 + 0.0j
                bm = 0.0 + 0.0j
                at = 0.0 + 0.0j
                bt = 0.0 + 0.0j
                for l in range(m, lmax + 1):
                    k = l * (l + 1) // 2 + m
                    am += p[k] * cpos[k]
                    bm += p[k] * cneg[k]
                    at += dp[k] * cpos[k]
                    bt += dp[k] * cneg[k]
                acc += am * em + bm * em.conjugate()
                acct += at * em + bt * em.conjugate()
                accp += 1j * m * (am * em - bm * em.conjugate()) / si
            val[i] = acc
            dth[i] = acct
            dps[i] = accp
        return val, dth, dps


# ---------------------------------------------------------------------------
# public entry points

def legendre_table(lmax: int, x, impl: str | None = None) -> np.ndarray:
    """Normalized Legendre table Plm(x) of shape (len(x), tri_size(lmax))."""
    impl = _resolve(impl)
    x = np.ascontiguousarray(x, dtype=np.float64)
    c_mm, c_ml, ra, rb = _rec_tables(lmax)
    if impl == "numba":
        return _legendre_table_nb(lmax, x, c_mm, c_ml, ra, rb)
    return _legendre_table_np(lmax, x)


def pack_coeffs(coeffs: np.ndarray, lmax: int):
    """Split a full (lmax+1)^2 coefficient vector into the two packed arrays
    used by the scatter kernels: cpos[tri(l,m)] = f_{l,m} and
    cneg[tri(l,m)] = (-1)^m f_{l,-m} for m >= 1."""
    n = tri_size(lmax)
    cpos = np.zeros(n, dtype=np.complex128)
    cneg = np.zeros(n, dtype=np.complex128)
    for m in range(0, lmax + 1):
        ls = np.arange(m, lmax + 1)
        full_pos = ls * ls + ls + m
        tri = ls * (ls + 1) // 2 + m
        cpos[tri] = coeffs[full_pos]
        if m >= 1:
            full_neg = ls * ls + ls - m
            cneg[tri] = (-1.0) ** m * coeffs[full_neg]
    return cpos, cneg


def scatter_eval(coeffs: np.ndarray, lmax: int, costheta, phi, impl: str | None = None):
    """Evaluate sum f_lm Y_lm at scattered directions (costheta, phi)."""
    impl = _resolve(impl)
    ct = np.ascontiguousarray(costheta, dtype=np.float64)
    ph = np.ascontiguousarray(phi, dtype=np.float64)
    cpos, cneg = pack_coeffs(np.ascontiguousarray(coeffs, dtype=np.complex128), lmax)
    if impl == "numba":
        c_mm, c_ml, ra, rb = _rec_tables(lmax)
        return _scatter_nb(cpos, cneg, lmax, ct, ph, c_mm, c_ml, ra, rb)
    return _scatter_np(cpos, cneg, lmax, ct, ph)


def scatter_eval_grad(coeffs: np.ndarray, lmax: int, costheta, phi, impl: str | None = None):
    """Evaluate (f, df/dtheta, (1/sin theta) df/dphi) at scattered directions."""
    impl = _resolve(impl)
    ct = np.ascontiguousarray(costheta, dtype=np.float64)
    ph = np.ascontiguousarray(phi, dtype=np.float64)
    cpos, cneg = pack_coeffs(np.ascontiguousarray(coeffs, dtype=np.complex128), lmax)
    if impl == "numba":
        c_mm, c_ml, ra, rb = _rec_tables(lmax)
        dA, dB = _dtheta_tables(lmax)
        return _scatter_grad_nb(cpos, cneg, lmax, ct, ph, c_mm, c_ml, ra, rb, dA, dB)
    return _scatter_grad_np(cpos, cneg, lmax, ct, ph)


def warmup(lmax: int = 4) -> None:
    """Trigger JIT compilation (no-op on the numpy backend)."""
    ct = np.array([0.1, -0.4])
    ph = np.array([0.3, 2.1])
    coeffs = np.zeros((lmax + 1) ** 2, dtype=np.complex128)
    coeffs[0] = 1.0
    legendre_table(lmax, ct)
    scatter_eval(coeffs, lmax, ct, ph)
    scatter_eval_grad(coeffs, lmax, ct, ph)
