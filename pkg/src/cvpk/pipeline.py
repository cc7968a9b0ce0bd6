"""Route a (family, size) request to the recursion or to the oracle."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

from . import oracle
from .kernels import is_power_of_two, make_kernel
from .pb_analysis import Pb, partial_distances, pb_cvpk_both
from .scaling import ScalingConfig, scaling_exponent

log = logging.getLogger(__name__)

RECURSIVE_FAMILIES = ("cvpk", "cvpk-swapped")


def compute_pb(family: str, n: int, workers: Optional[int] = None, force: bool = False,
               guard: int = oracle.DEFAULT_GUARD) -> Pb:
    """PB for any supported family.

    cvpk and cvpk-swapped of size >= 4 go through the GPB recursion; every
    other family (and the tiny sizes) is enumerated by the oracle.
    """
    if not is_power_of_two(n):
        raise ValueError(f"size must be a power of two, got {n}")
    if family in RECURSIVE_FAMILIES and n >= 4:
        plain, swapped = pb_cvpk_both(n.bit_length() - 1, workers)
        return swapped if family == "cvpk-swapped" else plain
    kernel = make_kernel(family, n)
    return oracle.pb_oracle(kernel, guard=guard, force=force)


@dataclass(frozen=True)
class Table3Row:
    n: int
    E: float
    E_swapped: float
    mu: float
    mu_swapped: float
    mu_sorted: Optional[float]

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "E": f"{self.E:.5f}",
            "E_swapped": f"{self.E_swapped:.5f}",
            "mu": f"{self.mu:.3f}",
            "mu_swapped": f"{self.mu_swapped:.3f}",
            "mu_sorted": None if self.mu_sorted is None else f"{self.mu_sorted:.3f}",
        }


def table3(max_size: int, cfg: ScalingConfig = ScalingConfig(), workers: Optional[int] = None,
           guard: int = oracle.DEFAULT_GUARD) -> list[Table3Row]:
    """Polarization rate and scaling exponent of Q, Q~ (and Q-bar where enumerable)."""
    rows = []
    n = 4
    while n <= max_size:
        log.info("table3: n = %d", n)
        plain, swapped = pb_cvpk_both(n.bit_length() - 1, workers)
        mu_sorted = None
        if n in (4, 8):
            # no reordering table at these sizes; d is already ascending
            mu_sorted = scaling_exponent(plain, cfg).mu
        elif n == 16 and n <= guard:
            mu_sorted = scaling_exponent(oracle.pb_oracle(make_kernel("cvpk-sorted", n)), cfg).mu
        rows.append(Table3Row(
            n,
            partial_distances(plain).E,
            partial_distances(swapped).E,
            scaling_exponent(plain, cfg).mu,
            scaling_exponent(swapped, cfg).mu,
            mu_sorted,
        ))
        n *= 2
    return rows
