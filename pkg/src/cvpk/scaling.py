"""BEC scaling exponent from a polarization behaviour.

On the BEC each phase ``i`` of a kernel turns an erasure probability ``z``
into ``f_i(z)``, the Bernstein evaluation of its PB polynomial.  The scaling
exponent comes from the dominant eigenvalue ``lam`` of the averaging operator

    (T g)(z) = (1/n) * sum_i g(f_i(z))

on functions vanishing at 0 and 1, via ``mu = ln(n) / ln(1/lam)``.  The
eigenvalue is found by power iteration on a uniform grid.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.stats import binom

from .pb_analysis import Pb
from .weight_enum import erasure_fractions

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScalingConfig:
    grid_size: int = 4096
    max_iters: int = 10000
    tol: float = 1e-9
    interpolation: str = "cubic"

    def __post_init__(self) -> None:
        if self.grid_size < 256:
            raise ValueError("grid_size must be at least 256")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        if self.interpolation not in ("linear", "cubic"):
            raise ValueError(f"unknown interpolation {self.interpolation!r}")


@dataclass(frozen=True)
class ScalingResult:
    mu: float
    lam: float
    iters_used: int
    converged: bool
    rayleigh: float

    def to_dict(self, n: int, family: str, cfg: ScalingConfig) -> dict:
        return {
            "n": n,
            "family": family,
            "mu": round(self.mu, 6),
            "lambda": round(self.lam, 12),
            "iters": self.iters_used,
            "converged": self.converged,
            "grid": cfg.grid_size,
            "tol": cfg.tol,
        }


class SubchannelFunctions:
    """The erasure-probability maps ``f_0 .. f_{n-1}`` of a kernel."""

    def __init__(self, pb: Pb) -> None:
        self.n = pb.n
        self.fractions = np.stack([erasure_fractions(p, pb.n) for p in pb.polys])

    def __len__(self) -> int:
        return self.n

    def __call__(self, z) -> np.ndarray:
        """Array of shape ``(n,) + shape(z)`` with ``f_i(z)``."""
        z = np.asarray(z, dtype=float)
        flat = z.reshape(-1)
        pmf = binom.pmf(np.arange(self.n + 1)[:, None], self.n, flat[None, :])
        out = self.fractions @ pmf
        return np.clip(out, 0.0, 1.0).reshape((self.n,) + z.shape)

    def component(self, i: int):
        return lambda z: self(z)[i]


def subchannel_fns(p: Pb) -> SubchannelFunctions:
    return SubchannelFunctions(p)


def scaling_exponent(p: Pb, cfg: ScalingConfig = ScalingConfig()) -> ScalingResult:
    if p.n < 2:
        raise ValueError("scaling exponent needs n >= 2")
    z = np.linspace(0.0, 1.0, cfg.grid_size + 1)
    images = subchannel_fns(p)(z)
    n = p.n

    def apply(g: np.ndarray) -> np.ndarray:
        if cfg.interpolation == "cubic":
            vals = PchipInterpolator(z, g)(images)
        else:
            vals = np.interp(images, z, g)
        h = vals.mean(axis=0)
        h[0] = h[-1] = 0.0
        return h

    g = z * (1.0 - z)
    g /= np.abs(g).max()
    lam_prev = math.nan
    lam = math.nan
    converged = False
    iters = 0
    for iters in range(1, cfg.max_iters + 1):
        h = apply(g)
        lam = float(np.abs(h).max())
        if lam == 0.0:
            raise ArithmeticError("operator annihilated the iterate")
        g = h / lam
        if abs(lam - lam_prev) < cfg.tol:
            converged = True
            break
        lam_prev = lam
    if not converged:
        log.warning("power iteration stopped after %d iterations without converging", iters)

    tg = apply(g)
    rayleigh = float(np.dot(g, tg) / np.dot(g, g))
    mu = math.log(n) / math.log(1.0 / lam)
    return ScalingResult(mu, lam, iters, converged, rayleigh)


def result_json(result: ScalingResult, n: int, family: str, cfg: ScalingConfig) -> str:
    return json.dumps(result.to_dict(n, family, cfg), separators=(",", ":"))
