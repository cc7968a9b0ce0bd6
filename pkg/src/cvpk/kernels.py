"""Kernel constructors: the convolutional polarizing transform and its relatives."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .gf2 import BitMatrix, rank

FAMILIES = ("cvpk", "cvpk-swapped", "cvpk-sorted", "arikan")

PI_16 = (0, 1, 2, 3, 5, 4, 7, 6, 10, 8, 11, 9, 12, 13, 14, 15)
PI_32 = (
    0, 1, 2, 3, 6, 4, 9, 7, 13, 5, 20, 8, 14, 11, 18, 15,
    16, 10, 23, 19, 24, 12, 26, 17, 25, 21, 27, 22, 28, 29, 30, 31,
)
SORTING_PERMUTATIONS = {16: PI_16, 32: PI_32}


@dataclass(frozen=True)
class Kernel:
    n: int
    matrix: BitMatrix
    family: str
    # row i of ``matrix`` is row permutation[i] of the unpermuted base kernel
    permutation: Optional[tuple[int, ...]] = None

    def __post_init__(self) -> None:
        if self.matrix.shape != (self.n, self.n):
            raise ValueError(f"kernel matrix must be {self.n}x{self.n}")

    def row_strings(self) -> list[str]:
        return self.matrix.to_strings()

    def to_text(self) -> str:
        return "\n".join(self.row_strings()) + "\n"

    def to_json(self) -> str:
        return json.dumps(self.row_strings())

    def is_invertible(self) -> bool:
        return rank(self.matrix) == self.n


def is_power_of_two(n: int) -> bool:
    return isinstance(n, int) and n >= 1 and n & (n - 1) == 0


def _check_size(n: int) -> None:
    if not is_power_of_two(n):
        raise ValueError(f"kernel size must be a power of two, got {n!r}")


def xz_matrices(l: int) -> tuple[BitMatrix, BitMatrix]:
    """The ``l x l/2`` banded matrices X and Z of one transform layer.

    Column ``j`` of X has ones in rows ``2j, 2j+1, 2j+2`` and column ``j`` of Z
    in rows ``2j+1, 2j+2`` (rows past ``l - 1`` are dropped).
    """
    if not isinstance(l, int) or l < 2 or l % 2:
        raise ValueError(f"l must be a positive even integer, got {l!r}")
    half = l // 2
    x_rows = [0] * l
    z_rows = [0] * l
    for j in range(half):
        for i in range(2 * j, min(2 * j + 3, l)):
            x_rows[i] |= 1 << j
            if i > 2 * j:
                z_rows[i] |= 1 << j
    return BitMatrix(tuple(x_rows), half), BitMatrix(tuple(z_rows), half)


def cvpk_matrix(n: int) -> BitMatrix:
    _check_size(n)
    q = BitMatrix((1,), 1)
    size = 1
    while size < n:
        size *= 2
        x, z = xz_matrices(size)
        q = (x @ q).hstack(z @ q)
    return q


def cvpk(n: int) -> Kernel:
    """Convolutional polarizing transform ``Q^(n)``, built bottom-up from ``Q^(1) = (1)``."""
    return Kernel(n, cvpk_matrix(n), "cvpk")


def swap_permutation(n: int) -> tuple[int, ...]:
    """Row permutation exchanging rows ``2i`` and ``2i+1`` for ``i = 2 .. n/2-3``."""
    perm = list(range(n))
    for i in range(2, n // 2 - 2):
        perm[2 * i], perm[2 * i + 1] = perm[2 * i + 1], perm[2 * i]
    return tuple(perm)


def swapped_cvpk(n: int) -> Kernel:
    # For n < 16 the swap range is empty and the kernel equals Q^(n).
    base = cvpk_matrix(n)
    perm = swap_permutation(n)
    return Kernel(n, base.permute_rows(perm), "cvpk-swapped", perm)


def _inverse(perm: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return tuple(inv)


def sorted_cvpk(n: int, as_printed: bool = False) -> Kernel:
    """``Q^(n)`` with rows ordered by partial distance (n = 16 or 32 only).

    The tables list, for row ``i`` of ``Q^(n)``, its position in the sorted
    kernel; that direction is the one whose partial distances come out
    ascending.  ``as_printed=True`` instead takes row ``i`` from row
    ``perm[i]`` of ``Q^(n)``.
    """
    if n not in SORTING_PERMUTATIONS:
        raise ValueError(f"sorted kernel only available for n in {sorted(SORTING_PERMUTATIONS)}, got {n!r}")
    table = SORTING_PERMUTATIONS[n]
    perm = table if as_printed else _inverse(table)
    return Kernel(n, cvpk_matrix(n).permute_rows(perm), "cvpk-sorted", perm)


ARIKAN_F = BitMatrix.from_strings(["10", "11"])


def kron(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    rows = []
    for ra in a.rows:
        for rb in b.rows:
            acc = 0
            for c in range(a.cols):
                if (ra >> c) & 1:
                    acc |= rb << (c * b.cols)
            rows.append(acc)
    return BitMatrix(tuple(rows), a.cols * b.cols)


def arikan_power(m: int) -> Kernel:
    """``F^{(x) m}`` for the 2x2 Arikan kernel F."""
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"m must be a positive integer, got {m!r}")
    mat = ARIKAN_F
    for _ in range(m - 1):
        mat = kron(mat, ARIKAN_F)
    return Kernel(mat.nrows, mat, "arikan-power")


def make_kernel(family: str, n: int) -> Kernel:
    """Dispatch on the CLI family names."""
    if family == "cvpk":
        return cvpk(n)
    if family == "cvpk-swapped":
        return swapped_cvpk(n)
    if family == "cvpk-sorted":
        return sorted_cvpk(n)
    if family in ("arikan", "arikan-power"):
        _check_size(n)
        if n < 2:
            raise ValueError("Arikan kernel power needs n >= 2")
        return arikan_power(n.bit_length() - 1)
    raise ValueError(f"unknown kernel family {family!r}")
