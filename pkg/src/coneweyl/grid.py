"""Gauss-Legendre x uniform-phi product quadrature on the unit sphere, with
forward/backward spherical-harmonic transforms.

Node counts default to n_theta = 2(lmax+1) and n_phi = 4(lmax+1), which makes
the rule exact for integrands of combined spherical-harmonic degree up to
3*lmax and bandwidth 3*lmax in phi.  In particular the analysis of a product
of two band-limited functions is exact up to the projection cutoff.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import kernels
from .kernels import tri_index


@dataclass(frozen=True)
class QuadratureGrid:
    lmax: int
    n_theta: int
    n_phi: int
    costheta: np.ndarray = field(repr=False)
    theta: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)
    wtheta: np.ndarray = field(repr=False)
    ptab: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, lmax: int, n_theta: int | None = None, n_phi: int | None = None):
        n_theta = n_theta if n_theta is not None else 2 * (lmax + 1)
        n_phi = n_phi if n_phi is not None else 4 * (lmax + 1)
        if n_theta < lmax + 1 or n_phi < 2 * lmax + 1:
            raise ValueError("grid too small for the requested bandwidth")
        x, w = np.polynomial.legendre.leggauss(n_theta)
        phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
        ptab = kernels.legendre_table(lmax, x)
        g = cls(
            lmax=lmax,
            n_theta=n_theta,
            n_phi=n_phi,
            costheta=x,
            theta=np.arccos(x),
            phi=phi,
            wtheta=w,
            ptab=ptab,
        )
        return g

    # -- geometry -----------------------------------------------------------

    @property
    def weights(self) -> np.ndarray:
        """Full (n_theta, n_phi) weight array; sums to 4*pi."""
        return np.outer(self.wtheta, np.full(self.n_phi, 2.0 * np.pi / self.n_phi))

    def unit_vectors(self) -> np.ndarray:
        """Cartesian unit directions, shape (3, n_theta, n_phi)."""
        st = np.sqrt(np.clip(1.0 - self.costheta**2, 0.0, None))[:, None]
        ct = self.costheta[:, None]
        cp = np.cos(self.phi)[None, :]
        sp = np.sin(self.phi)[None, :]
        return np.stack([st * cp, st * sp, ct * np.ones_like(cp)])

    # -- quadrature ---------------------------------------------------------

    def integrate(self, values: np.ndarray):
        return np.einsum("i,ij->", self.wtheta, values) * (2.0 * np.pi / self.n_phi)

    def inner(self, a: np.ndarray, b: np.ndarray):
        """Quadrature form of the L2(S^2) inner product, conjugating `a`."""
        return self.integrate(np.conj(a) * b)

    # -- transforms ---------------------------------------------------------

    def analysis(self, values: np.ndarray) -> np.ndarray:
        """Grid section -> orthonormal SH coefficients (length (lmax+1)^2)."""
        lmax = self.lmax
        G = np.fft.fft(values, axis=1) * (2.0 * np.pi / self.n_phi)
        coeffs = np.zeros((lmax + 1) ** 2, dtype=np.complex128)
        for m in range(0, lmax + 1):
            ls = np.arange(m, lmax + 1)
            tri = ls * (ls + 1) // 2 + m
            Pm = self.ptab[:, tri]
            gp = self.wtheta * G[:, m % self.n_phi]
            coeffs[ls * ls + ls + m] = Pm.T @ gp
            if m >= 1:
                gn = self.wtheta * G[:, (-m) % self.n_phi]
                coeffs[ls * ls + ls - m] = (-1.0) ** m * (Pm.T @ gn)
        return coeffs

    def _fourier_rows(self, coeffs: np.ndarray, tab: np.ndarray) -> np.ndarray:
        lmax = self.lmax
        H = np.zeros((self.n_theta, self.n_phi), dtype=np.complex128)
        for m in range(0, lmax + 1):
            ls = np.arange(m, lmax + 1)
            tri = ls * (ls + 1) // 2 + m
            Pm = tab[:, tri]
            H[:, m % self.n_phi] += Pm @ coeffs[ls * ls + ls + m]
            if m >= 1:
                H[:, (-m) % self.n_phi] += (-1.0) ** m * (Pm @ coeffs[ls * ls + ls - m])
        return H

    def synthesis(self, coeffs: np.ndarray) -> np.ndarray:
        """Orthonormal SH coefficients -> grid section (complex)."""
        H = self._fourier_rows(np.asarray(coeffs, dtype=np.complex128), self.ptab)
        return np.fft.ifft(H, axis=1) * self.n_phi

    def synthesis_grad(self, coeffs: np.ndarray):
        """Returns (f, df/dtheta, (1/sin theta) df/dphi) on the grid."""
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        val = self.synthesis(coeffs)
        dth = np.fft.ifft(self._fourier_rows(coeffs, self._dptab), axis=1) * self.n_phi
        # phi derivative: multiply coefficient blocks by i*m, divide by sin(theta)
        lmax = self.lmax
        H = np.zeros((self.n_theta, self.n_phi), dtype=np.complex128)
        sin = np.sqrt(np.clip(1.0 - self.costheta**2, 1e-300, None))
        for m in range(1, lmax + 1):
            ls = np.arange(m, lmax + 1)
            tri = ls * (ls + 1) // 2 + m
            Pm = self.ptab[:, tri]
            H[:, m % self.n_phi] += 1j * m * (Pm @ coeffs[ls * ls + ls + m])
            H[:, (-m) % self.n_phi] += (
                -1j * m * (-1.0) ** m * (Pm @ coeffs[ls * ls + ls - m])
            )
        dph = (np.fft.ifft(H, axis=1) * self.n_phi) / sin[:, None]
        return val, dth, dph

    @property
    def _dptab(self) -> np.ndarray:
        tab = getattr(self, "_dptab_cache", None)
        if tab is None:
            tab = kernels.legendre_dtheta(self.lmax, self.ptab)
            object.__setattr__(self, "_dptab_cache", tab)
        return tab


@lru_cache(maxsize=32)
def grid_for(lmax: int) -> QuadratureGrid:
    return QuadratureGrid.build(lmax)


def sh_index(l: int, m: int) -> int:
    """Index of (l, m) in the full coefficient layout, m in [-l, l]."""
    return l * l + l + m


def laplace_eigs(lmax: int) -> np.ndarray:
    """Vector of l(l+1) in the full coefficient layout."""
    ls = np.concatenate([np.full(2 * l + 1, l) for l in range(lmax + 1)])
    return (ls * (ls + 1)).astype(np.float64)


_ = tri_index  # re-exported for callers that pack tables directly
