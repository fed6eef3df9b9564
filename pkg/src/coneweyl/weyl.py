"""The symplectic group of pairs (D, c) and the Weyl *-algebra over it.

Elements of the group are pairs of real cone functions: D of degree 0 and c
of degree -2 whose invariant integral is an integer multiple of 4*pi*e (the
charge index).  Products of Weyl generators reduce exactly by the
exponentiated symplectic phase; elements are finite complex combinations in
normal form.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .cone import (
    FOUR_PI,
    ConeFunction,
    LorentzTransform,
    integrate_invariant,
    lorentz_pullback,
    sh_dot,
)
from .errors import DegreeError, NonIntegerChargeError


def charge_index(c: ConeFunction, e: float = 1.0, tol: float = 1e-8) -> int:
    """Nearest integer to (1/4*pi*e) * invariant integral of c; raises
    NonIntegerChargeError when the residual exceeds `tol`."""
    if c.degree != -2:
        raise DegreeError(f"charge index needs degree -2, got {c.degree}")
    q = integrate_invariant(c).real / (FOUR_PI * e)
    n = round(q)
    scale = max(1.0, c.norm() / (FOUR_PI * e))
    if abs(q - n) > tol * scale:
        raise NonIntegerChargeError(q, q - n, tol * scale)
    return int(n)


@dataclass(frozen=True)
class SymplecticPair:
    """A group element (D, c) with its cached integer charge index."""

    D: ConeFunction
    c: ConeFunction
    n: int

    @classmethod
    def make(cls, D: ConeFunction, c: ConeFunction, e: float = 1.0, tol: float = 1e-8):
        if D.degree != 0:
            raise DegreeError("D must have degree 0")
        if not (D.real_flag and c.real_flag):
            raise ValueError("symplectic pairs are built from real functions")
        return cls(D, c, charge_index(c, e, tol))

    @classmethod
    def zero(cls, lmax: int = 2) -> "SymplecticPair":
        return cls(ConeFunction.zeros(0, lmax), ConeFunction.zeros(-2, lmax), 0)

    def __add__(self, other: "SymplecticPair") -> "SymplecticPair":
        return SymplecticPair(self.D + other.D, self.c + other.c, self.n + other.n)

    def __neg__(self) -> "SymplecticPair":
        return SymplecticPair(-self.D, -self.c, -self.n)

    def scale(self, s: float) -> "SymplecticPair":
        """Real scaling; only meaningful inside the zero-charge subspace
        unless s keeps the charge integral an integer."""
        if self.n != 0 and abs(s * self.n - round(s * self.n)) > 1e-12:
            raise NonIntegerChargeError(s * self.n, s * self.n - round(s * self.n), 1e-12)
        return SymplecticPair(s * self.D, s * self.c, round(s * self.n))

    def distance(self, other: "SymplecticPair") -> float:
        return math.hypot((self.D - other.D).norm(), (self.c - other.c).norm())

    def transform(self, L: LorentzTransform) -> "SymplecticPair":
        return SymplecticPair(lorentz_pullback(self.D, L), lorentz_pullback(self.c, L), self.n)


def symplectic(p1: SymplecticPair, p2: SymplecticPair) -> float:
    """(1/4*pi) * invariant integral of (D1 c2 - D2 c1); antisymmetric and
    additive in each slot."""
    val = sh_dot(p1.D, p2.c) - sh_dot(p2.D, p1.c)
    return float(val.real) / FOUR_PI


@dataclass(frozen=True)
class WeylGenerator:
    pair: SymplecticPair


@dataclass(frozen=True)
class WeylElement:
    """Finite combination sum_i coeff_i W(pair_i), kept in normal form: no
    two terms share a pair (within the merge tolerance) and zero terms are
    dropped."""

    terms: tuple[tuple[complex, WeylGenerator], ...]

    @classmethod
    def from_terms(cls, terms, tol_merge: float = 1e-9) -> "WeylElement":
        merged: list[list] = []
        for coeff, gen in terms:
            for slot in merged:
                other = slot[1]
                scale = 1.0 + other.pair.D.norm() + other.pair.c.norm()
                if gen.pair.distance(other.pair) < tol_merge * scale:
                    slot[0] += coeff
                    break
            else:
                merged.append([complex(coeff), gen])
        total = sum(abs(c) for c, _ in merged)
        kept = tuple((c, g) for c, g in merged if abs(c) > 1e-15 * max(total, 1e-300))
        return cls(kept)

    @classmethod
    def generator(cls, pair: SymplecticPair) -> "WeylElement":
        return cls(((1.0 + 0.0j, WeylGenerator(pair)),))

    @classmethod
    def unit(cls, lmax: int = 2) -> "WeylElement":
        return cls.generator(SymplecticPair.zero(lmax))

    def __len__(self) -> int:
        return len(self.terms)

    def scaled(self, s: complex) -> "WeylElement":
        return WeylElement(tuple((s * c, g) for c, g in self.terms))

    def to_json_dict(self) -> dict:
        return {
            "terms": [
                {
                    "re": float(c.real),
                    "im": float(c.imag),
                    "D": g.pair.D.to_json_dict(),
                    "c": g.pair.c.to_json_dict(),
                }
                for c, g in self.terms
            ]
        }

    @classmethod
    def from_json_dict(cls, d: dict, e: float = 1.0) -> "WeylElement":
        terms = []
        for t in d["terms"]:
            D = ConeFunction.from_json_dict(t["D"])
            c = ConeFunction.from_json_dict(t["c"])
            pair = SymplecticPair.make(D, c, e)
            terms.append((t["re"] + 1j * t["im"], WeylGenerator(pair)))
        return cls.from_terms(terms)


def weyl(D: ConeFunction, c: ConeFunction, e: float = 1.0) -> WeylElement:
    """Convenience constructor for a single generator W(D, c)."""
    return WeylElement.generator(SymplecticPair.make(D, c, e))


def multiply(A: WeylElement, B: WeylElement, tol_merge: float = 1e-9) -> WeylElement:
    """Bilinear product with exact phase reduction
    W(p) W(q) = exp(i/2 sigma(p, q)) W(p + q)."""
    out = []
    for ca, ga in A.terms:
        for cb, gb in B.terms:
            phase = 0.5 * symplectic(ga.pair, gb.pair)
            out.append((ca * cb * cmath.exp(1j * phase), WeylGenerator(ga.pair + gb.pair)))
    return WeylElement.from_terms(out, tol_merge)


def adjoint(A: WeylElement) -> WeylElement:
    return WeylElement(tuple((np.conj(c), WeylGenerator(-g.pair)) for c, g in A.terms))


def lorentz_automorphism(A: WeylElement, L: LorentzTransform) -> WeylElement:
    """Pullback on every pair; charge indices are untouched."""
    return WeylElement(tuple((c, WeylGenerator(g.pair.transform(L))) for c, g in A.terms))
