"""Polarization behaviour (PB), partial distances and polarization rate."""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from . import subspaces
from .weight_enum import WeightEnum, sum_enums


@dataclass(frozen=True)
class Pb:
    """``polys[phi]`` enumerates the erasure configurations that erase ``u_phi``."""

    n: int
    polys: tuple[WeightEnum, ...]
    source: str = "cvpk"
    origin: str = "recursion"

    def __post_init__(self) -> None:
        if len(self.polys) != self.n:
            raise ValueError(f"expected {self.n} phase polynomials, got {len(self.polys)}")

    def __getitem__(self, phi: int) -> WeightEnum:
        return self.polys[phi]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Pb):
            return NotImplemented
        return self.n == other.n and self.polys == other.polys

    def __hash__(self) -> int:
        return hash((self.n, self.polys))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "family": self.source,
            "source": self.origin,
            "phases": [p.to_strings() for p in self.polys],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "Pb":
        polys = tuple(WeightEnum.from_strings(p) for p in data["phases"])
        return cls(int(data["n"]), polys, data.get("family", "cvpk"), data.get("source", "recursion"))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("phase,weight,count\n")
        for phi, p in enumerate(self.polys):
            for w, c in enumerate(p.coeffs):
                if c:
                    buf.write(f"{phi},{w},{c}\n")
        return buf.getvalue()


@dataclass(frozen=True)
class PartialDistanceProfile:
    d: tuple[int, ...]
    E: float

    @property
    def n(self) -> int:
        return len(self.d)

    def to_csv(self) -> str:
        lines = ["phase,d_i"] + [f"{i},{di}" for i, di in enumerate(self.d)]
        lines.append(f"E,{self.E:.5f}")
        return "\n".join(lines) + "\n"

    def __str__(self) -> str:
        return f"d = {' '.join(map(str, self.d))}; E = {self.E:.5f}"


def _box_sum(row, indices: Sequence[int]) -> WeightEnum:
    # Rows come either as 16 WeightEnums or as a packed row from the engine.
    if hasattr(row, "box_sum"):
        return row.box_sum(indices)
    return sum_enums(row[i] for i in indices)


def swapped_pairs(n: int) -> range:
    """Values of ``i`` whose rows ``2i`` and ``2i+1`` trade places."""
    return range(2, n // 2 - 2)


def phase_polys(n: int, phi: int, row, swapped: bool = False) -> list[tuple[int, WeightEnum]]:
    """PB polynomials obtainable from GPB row ``phi``.

    Every row gives its own phase; row ``n - 3`` also gives ``n - 2`` and
    ``n - 1``.  With ``swapped`` the row-paired kernel is produced instead.
    """
    pair_head = swapped and phi % 2 == 0 and phi // 2 in swapped_pairs(n)
    pair_tail = swapped and phi % 2 == 1 and (phi - 1) // 2 in swapped_pairs(n)
    out = []
    if pair_head:
        # both members of a swapped pair read GPB row 2i
        out.append((phi, _box_sum(row, subspaces.NO_010)))
        out.append((phi + 1, _box_sum(row, subspaces.NO_1X0)))
    elif not pair_tail:
        out.append((phi, _box_sum(row, subspaces.NO_100)))
    if phi == n - 3:
        out.append((n - 2, _box_sum(row, subspaces.NO_X10)))
        out.append((n - 1, _box_sum(row, subspaces.NO_XX1)))
    return out


def pb_from_rows(n: int, rows: Iterable[tuple[int, object]], swapped: bool = False,
                 source: Optional[str] = None) -> Pb:
    polys: list[Optional[WeightEnum]] = [None] * n
    for phi, row in rows:
        for k, p in phase_polys(n, phi, row, swapped):
            polys[k] = p
    if any(p is None for p in polys):
        raise ValueError("GPB rows did not cover every phase")
    family = source or ("cvpk-swapped" if swapped else "cvpk")
    return Pb(n, tuple(polys), family, "recursion")


def _gpb_rows(g) -> Iterator[tuple[int, object]]:
    return iter(enumerate(g.phases))


def pb_from_gpb(g) -> Pb:
    """Collapse a GPB to the PB of the same kernel."""
    if g.n < 4:
        raise ValueError("GPB-to-PB conversion needs n >= 4")
    return pb_from_rows(g.n, _gpb_rows(g))


def pb_swapped_from_gpb(g) -> Pb:
    """PB of the pair-swapped kernel from the GPB of ``Q^(n)``."""
    if g.n < 4:
        raise ValueError("GPB-to-PB conversion needs n >= 4")
    return pb_from_rows(g.n, _gpb_rows(g), swapped=True)


def pb_cvpk(m: int, swapped: bool = False, workers: Optional[int] = None) -> Pb:
    """PB of ``Q^(2^m)`` (or its swapped variant) streamed from the recursion."""
    return pb_cvpk_both(m, workers)[1 if swapped else 0]


def pb_cvpk_both(m: int, workers: Optional[int] = None) -> tuple[Pb, Pb]:
    """PB of ``Q^(2^m)`` and of the swapped kernel from one GPB pass."""
    from .gpb_engine import iter_packed_rows

    n = 1 << m
    plain: list = [None] * n
    swapped: list = [None] * n
    for phi, row in iter_packed_rows(m, workers):
        for k, p in phase_polys(n, phi, row, False):
            plain[k] = p
        for k, p in phase_polys(n, phi, row, True):
            swapped[k] = p
    return (Pb(n, tuple(plain), "cvpk", "recursion"),
            Pb(n, tuple(swapped), "cvpk-swapped", "recursion"))


def polarization_rate(d: Sequence[int]) -> float:
    n = len(d)
    if n < 2:
        raise ValueError("polarization rate needs n >= 2")
    log_n = math.log(n)
    return math.fsum(math.log(di) for di in d) / (n * log_n)


def partial_distances(p: Pb) -> PartialDistanceProfile:
    d = []
    for phi, poly in enumerate(p.polys):
        if poly.is_zero():
            raise ValueError(f"phase {phi} never erases: the kernel is not invertible")
        d.append(poly.min_degree())
    return PartialDistanceProfile(tuple(d), polarization_rate(d))


def check_swap_precondition(profile: PartialDistanceProfile) -> bool:
    d = profile.d
    return all(d[2 * i] >= d[2 * i + 1] for i in swapped_pairs(profile.n))
