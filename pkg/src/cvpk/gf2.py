"""Bit-packed linear algebra over GF(2).

Matrices are stored row-major with each row packed into a Python ``int``:
bit ``c`` of ``rows[r]`` is the entry ``(r, c)``.  Column vectors use the
same packing with bit ``r`` holding row ``r``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class BitVector:
    """Packed binary vector; bit ``i`` is coordinate ``i``."""

    len: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.len < 0:
            raise ValueError("negative vector length")
        if self.bits < 0 or self.bits >> self.len:
            raise ValueError(f"bits do not fit in length {self.len}")

    @classmethod
    def from_string(cls, s: str) -> "BitVector":
        """Parse ``"0100"`` as (0, 1, 0, 0)."""
        return cls(len(s), _pack(int(ch) for ch in s))

    @classmethod
    def from_list(cls, values: Sequence[int]) -> "BitVector":
        return cls(len(values), _pack(values))

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.len:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def weight(self) -> int:
        return bin(self.bits).count("1")

    def __str__(self) -> str:
        return "".join(str((self.bits >> i) & 1) for i in range(self.len))


@dataclass(frozen=True)
class BitMatrix:
    rows: tuple[int, ...]
    cols: int

    def __post_init__(self) -> None:
        if len(self.rows) < 1:
            raise ValueError("a BitMatrix needs at least one row")
        if self.cols < 0:
            raise ValueError("negative column count")
        for r in self.rows:
            if r < 0 or r >> self.cols:
                raise ValueError(f"row {r:b} wider than {self.cols} columns")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.cols

    @classmethod
    def from_strings(cls, rows: Sequence[str]) -> "BitMatrix":
        """Build from strings such as ``["1000", "1010"]``."""
        if not rows:
            raise ValueError("no rows given")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        return cls(tuple(_pack(int(ch) for ch in r) for r in rows), width)

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]]) -> "BitMatrix":
        if not rows:
            raise ValueError("no rows given")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        return cls(tuple(_pack(r) for r in rows), width)

    @classmethod
    def from_columns(cls, columns: Sequence[int], nrows: int) -> "BitMatrix":
        """Inverse of :meth:`columns`."""
        rows = [0] * nrows
        for c, col in enumerate(columns):
            for r in range(nrows):
                if (col >> r) & 1:
                    rows[r] |= 1 << c
        return cls(tuple(rows), len(columns))

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(tuple(1 << i for i in range(n)), n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls((0,) * nrows, ncols)

    def get(self, r: int, c: int) -> int:
        if not (0 <= r < self.nrows and 0 <= c < self.cols):
            raise IndexError((r, c))
        return (self.rows[r] >> c) & 1

    def to_strings(self) -> list[str]:
        return ["".join(str((row >> c) & 1) for c in range(self.cols)) for row in self.rows]

    def to_lists(self) -> list[list[int]]:
        return [[(row >> c) & 1 for c in range(self.cols)] for row in self.rows]

    def columns(self) -> list[int]:
        """Columns packed as ints, bit ``r`` = row ``r``."""
        out = [0] * self.cols
        for r, row in enumerate(self.rows):
            c = 0
            while row:
                if row & 1:
                    out[c] |= 1 << r
                row >>= 1
                c += 1
        return out

    def transpose(self) -> "BitMatrix":
        return BitMatrix(tuple(self.columns()), self.nrows)

    def submatrix(self, rows: Iterable[int] | None = None, cols: Iterable[int] | None = None) -> "BitMatrix":
        """Keep the given rows/columns in their original relative order.

        ``None`` keeps everything.  Indices are sorted and de-duplicated.
        """
        row_idx = range(self.nrows) if rows is None else sorted(set(rows))
        if cols is None:
            return BitMatrix(tuple(self.rows[r] for r in row_idx), self.cols)
        col_idx = sorted(set(cols))
        for c in col_idx:
            if not 0 <= c < self.cols:
                raise IndexError(c)
        picked = []
        for r in row_idx:
            row = self.rows[r]
            v = 0
            for k, c in enumerate(col_idx):
                if (row >> c) & 1:
                    v |= 1 << k
            picked.append(v)
        return BitMatrix(tuple(picked), len(col_idx))

    def permute_rows(self, perm: Sequence[int]) -> "BitMatrix":
        """Row ``i`` of the result is row ``perm[i]`` of ``self``."""
        if sorted(perm) != list(range(self.nrows)):
            raise ValueError("not a permutation of the row indices")
        return BitMatrix(tuple(self.rows[p] for p in perm), self.cols)

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for row in self.rows:
            acc = 0
            j = 0
            while row:
                if row & 1:
                    acc ^= other.rows[j]
                row >>= 1
                j += 1
            out.append(acc)
        return BitMatrix(tuple(out), other.cols)

    def vecmul(self, v: BitVector) -> BitVector:
        """Row vector times matrix, ``v @ self``."""
        if v.len != self.nrows:
            raise ValueError("dimension mismatch")
        acc = 0
        for r in range(self.nrows):
            if (v.bits >> r) & 1:
                acc ^= self.rows[r]
        return BitVector(self.cols, acc)

    def hstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.nrows != other.nrows:
            raise ValueError("row counts differ")
        return BitMatrix(tuple(a | (b << self.cols) for a, b in zip(self.rows, other.rows)), self.cols + other.cols)


def _pack(values: Iterable[int]) -> int:
    acc = 0
    for i, v in enumerate(values):
        if v not in (0, 1):
            raise ValueError(f"not a bit: {v!r}")
        if v:
            acc |= 1 << i
    return acc


class EchelonBasis:
    """Basis of a GF(2) span with one vector per leading (highest) bit.

    ``pivots[b]`` is the basis vector whose highest set bit is ``b``.  The set
    of pivot positions is an invariant of the span, and the span of vectors
    with every bit ``>= t`` clear is exactly the span of pivots below ``t``.
    """

    __slots__ = ("pivots",)

    def __init__(self, vectors: Iterable[int] = ()) -> None:
        self.pivots: dict[int, int] = {}
        for v in vectors:
            self.insert(v)

    def copy(self) -> "EchelonBasis":
        other = EchelonBasis()
        other.pivots = dict(self.pivots)
        return other

    def reduce(self, v: int) -> int:
        pivots = self.pivots
        while v:
            lead = v.bit_length() - 1
            p = pivots.get(lead)
            if p is None:
                return v
            v ^= p
        return 0

    def insert(self, v: int) -> bool:
        """Add ``v`` to the span; returns True when the rank grew."""
        v = self.reduce(v)
        if not v:
            return False
        self.pivots[v.bit_length() - 1] = v
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rank(m: BitMatrix) -> int:
    """Rank over GF(2)."""
    return EchelonBasis(m.rows).rank


class ColumnSpace:
    """Column space of ``m`` with the elimination cached for repeated queries."""

    def __init__(self, m: BitMatrix) -> None:
        self.dim = m.nrows
        self.basis = EchelonBasis(m.columns())

    def contains(self, v: BitVector) -> bool:
        if v.len != self.dim:
            raise ValueError(f"vector of length {v.len} against {self.dim} rows")
        return self.basis.contains(v.bits)

    @property
    def rank(self) -> int:
        return self.basis.rank


def column_space_contains(m: BitMatrix, v: BitVector) -> bool:
    """True iff ``v`` is a GF(2) combination of the columns of ``m``."""
    return ColumnSpace(m).contains(v)
