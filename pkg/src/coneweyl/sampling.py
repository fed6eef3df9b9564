"""Reproducible random test data: smooth cone functions, hyperboloid points,
restricted Lorentz transforms, and admissible Casimir-family parameters."""

from __future__ import annotations

import numpy as np

from .cone import ConeFunction, HyperboloidPoint, LorentzTransform, mdot
from .grid import sh_index
from .params import Params


def smooth_function(
    rng: np.random.Generator,
    lmax: int,
    l_active: int = 8,
    degree: int = 0,
    scale: float = 1.0,
    real: bool = True,
) -> ConeFunction:
    """Random band-limited function with spectrally decaying coefficients;
    content is concentrated below l_active so products stay well resolved."""
    coeffs = np.zeros((lmax + 1) ** 2, dtype=np.complex128)
    for l in range(1, min(l_active, lmax) + 1):
        damp = scale * np.exp(-2.0 * l / l_active)
        for m in range(0, l + 1):
            z = damp * (rng.normal() + 1j * rng.normal())
            coeffs[sh_index(l, m)] = z
            if m > 0:
                if real:
                    coeffs[sh_index(l, -m)] = (-1.0) ** m * np.conj(z)
                else:
                    coeffs[sh_index(l, -m)] = damp * (rng.normal() + 1j * rng.normal())
        if real:
            coeffs[sh_index(l, 0)] = np.real(coeffs[sh_index(l, 0)])
    return ConeFunction(degree, lmax, coeffs, real)


def random_hyperboloid(rng: np.random.Generator, max_rapidity: float = 1.0) -> HyperboloidPoint:
    chi = rng.uniform(0.05, max_rapidity)
    axis = rng.normal(size=3)
    return HyperboloidPoint.boosted(chi, axis)


def random_lorentz(rng: np.random.Generator, max_rapidity: float = 1.0) -> LorentzTransform:
    rot1 = LorentzTransform.rotation(rng.uniform(0, 2 * np.pi), rng.normal(size=3))
    rot2 = LorentzTransform.rotation(rng.uniform(0, 2 * np.pi), rng.normal(size=3))
    boost = LorentzTransform.boost(rng.uniform(0, max_rapidity), rng.normal(size=3))
    return rot1 @ boost @ rot2


def random_family_args(
    rng: np.random.Generator,
    max_rapidity: float = 0.6,
    x_scale: float = 0.5,
    n_max: int = 3,
):
    """(v, x, lam, n) with x spacelike, x.v = 0, for the annihilation family."""
    v = random_hyperboloid(rng, max_rapidity)
    y = rng.normal(size=4)
    x = y - mdot(y, v.vec) * v.vec
    x = x * (x_scale * rng.uniform(0.3, 1.0) / np.sqrt(max(1e-12, -mdot(x, x))))
    lam = rng.uniform(-1.5, 1.5)
    n = int(rng.integers(1, n_max + 1))
    return v, x, lam, n
