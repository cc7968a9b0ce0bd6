"""Recursive computation of the generalized polarization behaviour (GPB) of Q^(n).

The GPB of an ``n x n`` kernel holds, for each phase ``phi < n - 2`` and each
subspace ``T_i`` of F_2^3, the weight enumerator of erasure configurations
whose recoverable-combination space at that phase is exactly ``T_i``.

Two routes compute a level from the previous one:

* :func:`combine` applies a transform table to one phase row literally,
  256 polynomial products per call;
* :func:`iter_gpb_rows` / :func:`gpb` run the whole recursion on
  Kronecker-packed integers, sharing the pair products of each source row
  between the phases that consume it.  Exact integer arithmetic makes the
  result independent of how the work is split across workers.
"""

from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from . import subspaces
from .gf2 import BitMatrix, BitVector
from .weight_enum import WeightEnum, mpz, pack, slot_bytes, sum_enums, unpack

log = logging.getLogger(__name__)

A0 = BitMatrix.from_strings(["111000", "001110", "000011"])
B0 = BitMatrix.from_strings(["011000", "000110", "000001"])

# Slot k keeps r[3-J .. 5-J] of r = p A0 + q B0 when its last J bits vanish.
#   slot 0: phi = 0        -> J = 3
#   slot 1: phi = 2psi + 1 -> J = 2
#   slot 2: phi = 2psi + 2 -> J = 1
#   slot 3: phi = n - 3    -> J = 0
SLOT_J = (3, 2, 1, 0)


@dataclass(frozen=True)
class TransformTables:
    slots: tuple[tuple[tuple[int, ...], ...], ...]

    def __getitem__(self, k: int) -> tuple[tuple[int, ...], ...]:
        return self.slots[k]


def _r_vector(p: int, q: int) -> str:
    """``p A0 + q B0`` as a 6-character bit string ``r0..r5``."""
    pv = BitVector.from_string(subspaces.vec3_str(p))
    qv = BitVector.from_string(subspaces.vec3_str(q))
    r = A0.vecmul(pv).bits ^ B0.vecmul(qv).bits
    return str(BitVector(6, r))


def combination_set(i: int, j: int, slot: int) -> list[str]:
    """All ``p A + q B`` restricted to the columns used by ``slot``.

    With ``p`` in ``T_i`` and ``q`` in ``T_j``; returned as sorted bit strings of
    length ``6 - (3 - J)``.
    """
    drop = 3 - SLOT_J[slot]
    out = {
        _r_vector(p, q)[drop:]
        for p in subspaces.ALL[i].members
        for q in subspaces.ALL[j].members
    }
    return sorted(out)


def build_transform_tables() -> TransformTables:
    tables = [[[0] * 16 for _ in range(16)] for _ in range(4)]
    for i in range(16):
        for j in range(16):
            collected: list[set[int]] = [set() for _ in range(4)]
            for p in subspaces.ALL[i].members:
                for q in subspaces.ALL[j].members:
                    r = _r_vector(p, q)
                    for k, J in enumerate(SLOT_J):
                        start = 3 - J
                        if r[start + 3:] == "0" * J:
                            collected[k].add(int(r[start:start + 3], 2))
            for k in range(4):
                mask = 0
                for v in collected[k]:
                    mask |= 1 << v
                if not subspaces._is_subspace_mask(mask):
                    raise AssertionError(f"slot {k} image of (T{i}, T{j}) is not XOR-closed")
                tables[k][i][j] = subspaces.index_of_mask(mask)
    return TransformTables(tuple(tuple(tuple(row) for row in t) for t in tables))


@lru_cache(maxsize=1)
def transform_tables() -> TransformTables:
    return build_transform_tables()


GpbRowT = tuple[WeightEnum, ...]


@dataclass(frozen=True)
class Gpb:
    """GPB of an ``n x n`` kernel: ``phases[phi][i]`` is the enumerator of box ``T_i``."""

    n: int
    phases: tuple[GpbRowT, ...]
    source: str = "recursion"

    def __post_init__(self) -> None:
        if len(self.phases) != self.n - 2:
            raise ValueError(f"expected {self.n - 2} phases, got {len(self.phases)}")
        if any(len(row) != 16 for row in self.phases):
            raise ValueError("each phase needs 16 subspace boxes")

    def box(self, phi: int, s: Union[int, subspaces.Subspace3]) -> WeightEnum:
        idx = s.index if isinstance(s, subspaces.Subspace3) else s
        return self.phases[phi][idx]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Gpb):
            return NotImplemented
        return self.n == other.n and self.phases == other.phases

    def __hash__(self) -> int:
        return hash((self.n, self.phases))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "source": self.source,
            "phases": [[p.to_strings() for p in row] for row in self.phases],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "Gpb":
        phases = tuple(tuple(WeightEnum.from_strings(p) for p in row) for row in data["phases"])
        return cls(int(data["n"]), phases, data.get("source", "recursion"))

    @classmethod
    def from_json(cls, text: str) -> "Gpb":
        return cls.from_dict(json.loads(text))


def _we(*coeffs: int) -> WeightEnum:
    return WeightEnum(coeffs)


_X = _we(0, 1)
_X2 = _we(0, 0, 1)
_X3 = _we(0, 0, 0, 1)
_O = WeightEnum()

GPB_Q4 = (
    (_we(0, 0, 0, 4, 1), _O, _X2, _X2, _X2, _X2, _X2, _X2,
     _O, _O, _X, _X, _O, _X, _X, _we(1)),
    (_we(0, 0, 0, 0, 1), _O, _O, _X3, _O, _X3, _X3, _X3,
     _O, _X2, _X2, _X2, _X2, _X2, _X2, _we(1, 4)),
)


def gpb_base() -> Gpb:
    """GPB of ``Q^(4)`` as tabulated (phases 0 and 1)."""
    return Gpb(4, GPB_Q4, "table")


def combine(row: Sequence[WeightEnum], table: Sequence[Sequence[int]]) -> list[WeightEnum]:
    """``out[l] = sum of row[i] * row[j]`` over pairs with ``table[i][j] == l``."""
    acc: list[list[WeightEnum]] = [[] for _ in range(16)]
    for i in range(16):
        for j in range(16):
            acc[table[i][j]].append(row[i] * row[j])
    return [sum_enums(terms) for terms in acc]


def psi_of(phi: int, n: int) -> int:
    """Source phase at the half-size kernel feeding phase ``phi`` of ``Q^(n)``.

    ``max(0, (phi - 1) // 2)`` everywhere except the last phase ``n - 3``,
    which reads the last source phase ``n/2 - 3``.
    """
    if phi == n - 3:
        return n // 2 - 3
    return max(0, (phi - 1) // 2)


def slot_of(phi: int, n: int) -> int:
    if phi == 0:
        return 0
    if phi == n - 3:
        return 3
    return 1 if phi % 2 else 2


# -- packed engine ----------------------------------------------------------


@dataclass
class PackedRow:
    """16 Kronecker-packed enumerators sharing ``count`` slots of ``width`` bytes."""

    boxes: list
    count: int
    width: int

    def box_sum(self, indices: Sequence[int]) -> WeightEnum:
        total = 0
        for i in indices:
            total += self.boxes[i]
        return WeightEnum(unpack(total, self.count, self.width))

    def unpack(self) -> GpbRowT:
        return tuple(WeightEnum(unpack(b, self.count, self.width)) for b in self.boxes)


def _repack(value, count: int, old: int, new: int):
    if not value:
        return mpz(0)
    buf = int(value).to_bytes(count * old, "little")
    src = np.frombuffer(buf, dtype=np.uint8).reshape(count, old)
    dst = np.zeros((count, new), dtype=np.uint8)
    dst[:, :old] = src
    return mpz(int.from_bytes(dst.tobytes(), "little"))


def _pair_products(row: Sequence) -> dict[tuple[int, int], object]:
    nz = [i for i in range(16) if row[i]]
    return {(i, j): row[i] * row[j] for a, i in enumerate(nz) for j in nz[a:]}


def _accumulate(products: dict, table: Sequence[Sequence[int]]) -> list:
    out = [mpz(0)] * 16
    for (i, j), p in products.items():
        out[table[i][j]] += p
        if i != j:
            out[table[j][i]] += p
    return out


def _expand_chunk(args) -> list[tuple[int, list]]:
    """Produce the output rows fed by source phases ``psi0 ..`` of one chunk."""
    psi0, rows, half = args
    tables = transform_tables()
    lam = 2 * half
    produced = []
    for k, row in enumerate(rows):
        psi = psi0 + k
        prods = _pair_products(row)
        if psi == 0:
            produced.append((0, _accumulate(prods, tables[0])))
        produced.append((2 * psi + 1, _accumulate(prods, tables[1])))
        produced.append((2 * psi + 2, _accumulate(prods, tables[2])))
        if psi == half - 3:
            produced.append((lam - 3, _accumulate(prods, tables[3])))
    return produced


def _chunks(rows: list, workers: int, half: int):
    n_src = half - 2
    size = max(1, -(-n_src // (4 * workers))) if workers > 1 else n_src
    for start in range(0, n_src, size):
        yield (start, rows[start:start + size], half)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("CVPK_THREADS", "1")))
    except ValueError:
        return 1


def _level_rows(rows: list, half: int, workers: int, pool: Optional[ProcessPoolExecutor]) -> Iterator[tuple[int, list]]:
    jobs = _chunks(rows, workers, half)
    results = pool.map(_expand_chunk, jobs) if pool is not None else map(_expand_chunk, jobs)
    for chunk in results:
        yield from chunk


def iter_packed_rows(m: int, workers: Optional[int] = None) -> Iterator[tuple[int, PackedRow]]:
    """Yield ``(phi, PackedRow)`` of the GPB of ``Q^(2^m)`` in phase order.

    Only the previous level is held in memory while the last one streams out.
    """
    if not isinstance(m, int) or m < 2:
        raise ValueError(f"m must be an integer >= 2, got {m!r}")
    workers = default_workers() if workers is None else max(1, workers)
    if m == 2:
        width = slot_bytes(5)
        for phi, row in enumerate(GPB_Q4):
            yield phi, PackedRow([mpz(pack(p.coeffs, width)) for p in row], 5, width)
        return

    # Level-Lambda products need slots of Lambda + 1 bits (coefficients < 2**Lambda).
    width = slot_bytes(9)
    rows = [[mpz(pack(p.coeffs, width)) for p in row] for row in GPB_Q4]
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for lam_exp in range(3, m + 1):
            lam = 1 << lam_exp
            half = lam // 2
            count = lam + 1
            log.info("GPB level n=%d (%d phases)", lam, lam - 2)
            stream = _level_rows(rows, half, workers, pool)
            if lam_exp == m:
                for phi, boxes in stream:
                    yield phi, PackedRow(boxes, count, width)
                return
            new_rows: list = [None] * (lam - 2)
            for phi, boxes in stream:
                new_rows[phi] = boxes
            next_width = slot_bytes(2 * lam + 1)
            rows = [[_repack(b, count, width, next_width) for b in row] for row in new_rows]
            width = next_width
    finally:
        if pool is not None:
            pool.shutdown()


def iter_gpb_rows(m: int, workers: Optional[int] = None) -> Iterator[tuple[int, GpbRowT]]:
    for phi, row in iter_packed_rows(m, workers):
        yield phi, row.unpack()


def gpb(m: int, family: str = "cvpk", workers: Optional[int] = None) -> Gpb:
    """GPB of ``Q^(2^m)`` via the recursion seeded at ``Q^(4)``."""
    if family != "cvpk":
        raise ValueError("the recursion only covers the plain cvpk family")
    if m == 2:
        return gpb_base()
    rows = tuple(row for _, row in iter_gpb_rows(m, workers))
    return Gpb(1 << m, rows, "recursion")


def write_gpb_json(m: int, stream, workers: Optional[int] = None) -> None:
    """Stream the GPB JSON document without materialising every row."""
    n = 1 << m
    stream.write('{"n":%d,"source":"recursion","phases":[' % n)
    for phi, row in iter_gpb_rows(m, workers):
        if phi:
            stream.write(",")
        stream.write(json.dumps([p.to_strings() for p in row], separators=(",", ":")))
    stream.write("]}")
