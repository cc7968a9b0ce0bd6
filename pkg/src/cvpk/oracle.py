"""Brute-force GPB and PB by enumerating every erasure configuration.

Works for any invertible kernel, so it is the ground truth the recursion is
checked against.  The enumeration walks subsets of unerased columns
depth-first and inserts one column at a time into an echelon basis keyed by
highest row index.  Two facts about that basis do all the work:

* ``u_phi`` is recoverable iff some basis vector has its highest bit at ``phi``;
* the span of vectors vanishing on rows ``>= phi + 3`` is spanned by pivots
  below ``phi + 3``, and only the pivots at ``phi .. phi + 2`` survive the
  projection onto the three coordinates ``phi .. phi + 2``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Optional

from . import subspaces
from .gf2 import BitVector, ColumnSpace
from .gpb_engine import Gpb
from .kernels import Kernel
from .pb_analysis import Pb
from .weight_enum import WeightEnum

log = logging.getLogger(__name__)

DEFAULT_GUARD = 20


class GuardError(ValueError):
    """Raised when an enumeration would exceed the size guard without ``force``."""


@dataclass(frozen=True)
class ErasureConfig:
    n: int
    mask: int

    def __post_init__(self) -> None:
        if self.mask < 0 or self.mask >> self.n:
            raise ValueError("erasure mask outside [n]")

    @classmethod
    def of(cls, n: int, positions: Iterable[int]) -> "ErasureConfig":
        mask = 0
        for p in positions:
            if not 0 <= p < n:
                raise ValueError(f"position {p} outside [0, {n})")
            mask |= 1 << p
        return cls(n, mask)

    @property
    def weight(self) -> int:
        return bin(self.mask).count("1")

    def positions(self) -> list[int]:
        return [i for i in range(self.n) if (self.mask >> i) & 1]

    def unerased(self) -> list[int]:
        return [i for i in range(self.n) if not (self.mask >> i) & 1]


def _as_config(kernel: Kernel, e) -> ErasureConfig:
    if isinstance(e, ErasureConfig):
        if e.n != kernel.n:
            raise ValueError("erasure configuration size differs from kernel size")
        return e
    return ErasureConfig.of(kernel.n, e)


def chi(kernel: Kernel, phi: int, e) -> subspaces.Subspace3:
    """Subspace of ``p`` with ``(p, 0...)`` in the column space of the kernel
    restricted to rows ``>= phi`` and unerased columns.

    Straight from the definition, one membership test per candidate ``p``.
    """
    n = kernel.n
    if not 0 <= phi <= n - 3:
        raise ValueError(f"phase {phi} outside [0, {n - 3}]")
    cfg = _as_config(kernel, e)
    sub = kernel.matrix.submatrix(rows=range(phi, n), cols=cfg.unerased())
    space = ColumnSpace(sub)
    members = []
    for p in range(8):
        target = subspaces.vec3_str(p) + "0" * (n - phi - 3)
        if space.contains(BitVector.from_string(target)):
            members.append(p)
    return subspaces.Subspace3(subspaces.index_of(members))


def erases(kernel: Kernel, phi: int, e) -> bool:
    """True iff ``(1, 0, ..., 0)`` is outside the restricted column space."""
    n = kernel.n
    if not 0 <= phi < n:
        raise ValueError(f"phase {phi} outside [0, {n})")
    cfg = _as_config(kernel, e)
    sub = kernel.matrix.submatrix(rows=range(phi, n), cols=cfg.unerased())
    target = BitVector(n - phi, 1)
    return not ColumnSpace(sub).contains(target)


def _check_guard(n: int, guard: int, force: bool) -> None:
    if n > guard and not force:
        raise GuardError(f"n = {n} exceeds the enumeration guard {guard}; pass force=True to run 2^{n} configurations")


def _enumerate(kernel: Kernel, want_gpb: bool, want_pb: bool):
    """Walk all 2^n configurations and tally both enumerators at once."""
    n = kernel.n
    columns = kernel.matrix.columns()
    n_gpb = max(n - 2, 0) if want_gpb else 0
    gpb_counts = [[[0] * (n + 1) for _ in range(16)] for _ in range(n_gpb)]
    pb_counts = [[0] * (n + 1) for _ in range(n)] if want_pb else []
    lookup = {m: i for i, m in enumerate(subspaces.MASKS)}
    span3 = subspaces.span_mask

    # pivots[b] holds the basis vector with highest bit b (0 when absent).
    def leaf(pivots: list[int], weight: int) -> None:
        if want_pb:
            for phi in range(n):
                if not pivots[phi]:
                    pb_counts[phi][weight] += 1
        for phi in range(n_gpb):
            gens = []
            for b in (phi, phi + 1, phi + 2):
                v = pivots[b]
                if v:
                    gens.append(((v >> phi) & 1) << 2 | ((v >> (phi + 1)) & 1) << 1 | ((v >> (phi + 2)) & 1))
            gpb_counts[phi][lookup[span3(gens)]][weight] += 1

    def insert(pivots: list[int], v: int) -> Optional[list[int]]:
        while v:
            lead = v.bit_length() - 1
            p = pivots[lead]
            if not p:
                out = pivots.copy()
                out[lead] = v
                return out
            v ^= p
        return None

    # Depth-first over columns; the erased count accumulates as the weight.
    stack = [(0, [0] * n, 0)]
    while stack:
        col, pivots, weight = stack.pop()
        if col == n:
            leaf(pivots, weight)
            continue
        stack.append((col + 1, pivots, weight + 1))
        grown = insert(pivots, columns[col])
        stack.append((col + 1, grown if grown is not None else pivots, weight))
    return gpb_counts, pb_counts


def gpb_oracle(kernel: Kernel, guard: int = DEFAULT_GUARD, force: bool = False) -> Gpb:
    n = kernel.n
    if n < 3:
        raise ValueError("GPB needs n >= 3")
    _check_guard(n, guard, force)
    log.info("oracle GPB: enumerating 2^%d configurations", n)
    counts, _ = _enumerate(kernel, want_gpb=True, want_pb=False)
    phases = tuple(tuple(WeightEnum(box) for box in row) for row in counts)
    return Gpb(n, phases, "oracle")


def pb_oracle(kernel: Kernel, guard: int = DEFAULT_GUARD, force: bool = False) -> Pb:
    n = kernel.n
    _check_guard(n, guard, force)
    log.info("oracle PB: enumerating 2^%d configurations", n)
    _, counts = _enumerate(kernel, want_gpb=False, want_pb=True)
    return Pb(n, tuple(WeightEnum(c) for c in counts), kernel.family, "oracle")
