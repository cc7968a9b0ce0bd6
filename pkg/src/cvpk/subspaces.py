"""The 16 linear subspaces of F_2^3, indexed in the canonical table order.

A 3-bit vector ``p = (p0, p1, p2)`` is the integer ``4*p0 + 2*p1 + p2``, so the
string ``"110"`` is 6.  ``p0`` multiplies the earliest input symbol of the
triple.  A subspace is an 8-bit mask with bit ``v`` set iff ``v`` is a member.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Union

Vec3 = Union[int, str]

_GENERATORS = (
    (),
    ("100",),
    ("010",),
    ("001",),
    ("110",),
    ("101",),
    ("011",),
    ("111",),
    ("100", "010"),
    ("100", "001"),
    ("010", "001"),
    ("110", "001"),
    ("100", "011"),
    ("101", "010"),
    ("110", "101"),
    ("100", "010", "001"),
)


def vec3(v: Vec3) -> int:
    """Normalise ``"101"`` or ``5`` to the integer encoding."""
    if isinstance(v, str):
        if len(v) != 3 or set(v) - {"0", "1"}:
            raise ValueError(f"not a 3-bit string: {v!r}")
        return int(v, 2)
    if not 0 <= v < 8:
        raise ValueError(f"not a 3-bit vector: {v!r}")
    return v


def vec3_str(v: int) -> str:
    return format(v, "03b")


def _closure_mask(generators: Iterable[int]) -> int:
    members = {0}
    for g in generators:
        members |= {m ^ g for m in members}
    mask = 0
    for m in members:
        mask |= 1 << m
    return mask


def _is_subspace_mask(mask: int) -> bool:
    if not mask & 1:
        return False
    members = [v for v in range(8) if (mask >> v) & 1]
    return all((mask >> (a ^ b)) & 1 for a in members for b in members)


MASKS: tuple[int, ...] = tuple(_closure_mask(vec3(g) for g in gens) for gens in _GENERATORS)
_INDEX_OF_MASK = {m: i for i, m in enumerate(MASKS)}
assert len(_INDEX_OF_MASK) == 16

# Per-vector membership tables, MEMBER[v][i] is True iff v is in T_i.
MEMBER = tuple(tuple(bool((m >> v) & 1) for m in MASKS) for v in range(8))


@dataclass(frozen=True)
class Subspace3:
    index: int

    def __post_init__(self) -> None:
        if not 0 <= self.index < 16:
            raise ValueError(f"subspace index out of range: {self.index}")

    @property
    def mask(self) -> int:
        return MASKS[self.index]

    @property
    def members(self) -> frozenset[int]:
        return frozenset(v for v in range(8) if (self.mask >> v) & 1)

    @property
    def dim(self) -> int:
        return len(self.members).bit_length() - 1

    def __contains__(self, v: Vec3) -> bool:
        return bool((self.mask >> vec3(v)) & 1)

    def __le__(self, other: "Subspace3") -> bool:
        return self.mask & ~other.mask == 0

    def member_strings(self) -> list[str]:
        return sorted(vec3_str(v) for v in self.members)

    def to_json(self) -> str:
        return json.dumps(self.member_strings())

    def __str__(self) -> str:
        gens = _GENERATORS[self.index]
        return "<" + ",".join(gens) + ">" if self.index != 15 else "F^3"


ALL = tuple(Subspace3(i) for i in range(16))


def index_of_mask(mask: int) -> int:
    try:
        return _INDEX_OF_MASK[mask]
    except KeyError:
        raise ValueError(f"mask {mask:08b} is not a subspace of F_2^3") from None


def index_of(vectors: Iterable[Vec3]) -> int:
    """Canonical index of a set of vectors that must already be a subspace."""
    mask = 0
    for v in vectors:
        mask |= 1 << vec3(v)
    if not _is_subspace_mask(mask):
        raise ValueError(f"{sorted(vec3_str(v) for v in range(8) if (mask >> v) & 1)} is not a subspace")
    return _INDEX_OF_MASK[mask]


def span_mask(generators: Iterable[int]) -> int:
    return _closure_mask(generators)


def span(generators: Iterable[Vec3]) -> Subspace3:
    return Subspace3(_INDEX_OF_MASK[_closure_mask(vec3(g) for g in generators)])


def contains(s: Subspace3, v: Vec3) -> bool:
    return v in s


def indices_without(*vectors: Vec3) -> tuple[int, ...]:
    """Indices of subspaces containing none of ``vectors``."""
    vs = [vec3(v) for v in vectors]
    return tuple(i for i in range(16) if not any(MEMBER[v][i] for v in vs))


# Selectors used when collapsing per-subspace enumerators to per-symbol ones.
NO_100 = indices_without("100")
NO_X10 = indices_without("010", "110")
NO_XX1 = indices_without("001", "011", "101", "111")
NO_010 = indices_without("010")
NO_1X0 = indices_without("100", "110")
