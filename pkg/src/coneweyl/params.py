"""Model parameters, tolerance table, and reproducible named RNG streams."""

from __future__ import annotations

import hashlib
import math
import os
from dataclasses import dataclass, field, replace

import numpy as np

DEFAULT_TOLERANCES: dict[str, float] = {
    # numerical plumbing
    "parseval": 1e-12,
    "charge": 1e-8,
    "zero_mean": 1e-10,
    "merge": 1e-9,
    "psd": 1e-9,
    # identity checks
    "kernel": 1e-8,
    "band": 1e-8,
    "phase": 1e-10,
    "exact": 1e-10,
    "oracle": 1e-8,
    "casimir": 1e-6,
    "casimir_fail": 1e-2,
    "spinor": 1e-6,
    "state_invariance": 1e-7,
    # field checks
    "flux": 1e-3,
    "field_agreement": 1e-3,
    "phase_field": 1e-6,
    "covariance_S": 1e-5,
    "wave": 1e-3,
}


@dataclass(frozen=True)
class Params:
    """Run configuration shared by the library and the CLI."""

    lmax: int = 48
    e: float = 1.0
    kappa: float = 2.0 / math.pi
    seed: int = 20210
    threads: int | None = None
    fields_lmax: int = 20
    cone_margin: float = 0.05
    fmt: str = "json"
    tolerances: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.lmax < 2 or self.e <= 0 or self.kappa <= 0:
            raise ValueError("lmax must be >= 2 and e, kappa positive")
        merged = dict(DEFAULT_TOLERANCES)
        unknown = set(self.tolerances) - set(merged)
        if unknown:
            raise ValueError(f"unknown tolerance names: {sorted(unknown)}")
        merged.update(self.tolerances)
        object.__setattr__(self, "tolerances", merged)

    def tol(self, name: str) -> float:
        return self.tolerances[name]

    def with_(self, **kw) -> "Params":
        return replace(self, **kw)

    def effective_threads(self) -> int:
        env = os.environ.get("CONEWEYL_THREADS")
        if env:
            return max(1, int(env))
        if self.threads:
            return max(1, int(self.threads))
        return os.cpu_count() or 1

    def stream(self, name: str) -> np.random.Generator:
        """Named RNG stream derived from the single seed; independent across
        names, reproducible across runs and thread counts."""
        tag = int.from_bytes(hashlib.sha256(name.encode()).digest()[:8], "big")
        return np.random.default_rng(np.random.SeedSequence([self.seed, tag]))

    @classmethod
    def from_dict(cls, d: dict) -> "Params":
        kw = {}
        for key in ("lmax", "seed", "threads", "fields_lmax"):
            if key in d and d[key] is not None:
                kw[key] = int(d[key])
        for key in ("e", "kappa", "cone_margin"):
            if key in d and d[key] is not None:
                kw[key] = float(d[key])
        if d.get("format"):
            kw["fmt"] = str(d["format"])
        if d.get("tolerances"):
            kw["tolerances"] = {k: float(v) for k, v in d["tolerances"].items()}
        return cls(**kw)


def pmap(fn, items, threads: int):
    """Deterministic parallel map: results keep the order of `items`."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))
