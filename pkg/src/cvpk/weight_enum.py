"""Weight-enumerator polynomials with exact nonnegative integer coefficients."""

from __future__ import annotations

import json
import math
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import binom

try:
    from gmpy2 import mpz
except ImportError:  # pragma: no cover - pure-Python fallback
    mpz = int


class WeightEnum:
    """``sum_w A_w x^w`` with ``A_w >= 0``.

    Coefficients are stored trimmed of trailing zeros, so two enumerators
    compare equal iff they are the same polynomial.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()) -> None:
        cs = [int(c) for c in coeffs]
        if any(c < 0 for c in cs):
            raise ValueError("weight enumerator coefficients must be nonnegative")
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[int, ...] = tuple(cs)

    @classmethod
    def monomial(cls, w: int, a: int = 1) -> "WeightEnum":
        return cls([0] * w + [a])

    @classmethod
    def binomial(cls, n: int) -> "WeightEnum":
        """``(1 + x)^n``."""
        return cls(math.comb(n, w) for w in range(n + 1))

    @classmethod
    def zero(cls) -> "WeightEnum":
        return cls()

    @classmethod
    def one(cls) -> "WeightEnum":
        return cls([1])

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, w: int) -> int:
        if w < 0:
            raise IndexError(w)
        return self.coeffs[w] if w < len(self.coeffs) else 0

    def min_degree(self) -> int:
        """Smallest ``w`` with ``A_w > 0``."""
        for w, c in enumerate(self.coeffs):
            if c:
                return w
        raise ValueError("zero polynomial has no nonzero monomial")

    def __eq__(self, other: object) -> bool:
        if isinstance(other, WeightEnum):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == WeightEnum([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "WeightEnum") -> "WeightEnum":
        return add(self, other)

    def __mul__(self, other: "WeightEnum") -> "WeightEnum":
        return mul(self, other)

    def __call__(self, x):
        """Plain polynomial evaluation (Horner)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self) -> str:
        return f"WeightEnum({self})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for w in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[w]
            if not c:
                continue
            if w == 0:
                terms.append(str(c))
            else:
                mono = "x" if w == 1 else f"x^{w}"
                terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms)

    def to_strings(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_strings(cls, values: Sequence[str]) -> "WeightEnum":
        return cls(int(v) for v in values)

    def to_json(self) -> str:
        return json.dumps(self.to_strings())

    @classmethod
    def from_json(cls, text: str) -> "WeightEnum":
        return cls.from_strings(json.loads(text))


def add(p: WeightEnum, q: WeightEnum) -> WeightEnum:
    a, b = p.coeffs, q.coeffs
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return WeightEnum(out)


def sum_enums(polys: Iterable[WeightEnum]) -> WeightEnum:
    out: list[int] = []
    for p in polys:
        if len(p.coeffs) > len(out):
            out.extend([0] * (len(p.coeffs) - len(out)))
        for i, c in enumerate(p.coeffs):
            out[i] += c
    return WeightEnum(out)


# Kronecker substitution: a polynomial with coefficients below 2**(8*B) is the
# integer sum c_w * 2**(8*B*w).  Byte-aligned slots make unpacking a slice.

def slot_bytes(max_coeff_bits: int) -> int:
    return max(1, (max_coeff_bits + 7) // 8)


def pack(coeffs: Sequence[int], width: int) -> int:
    """Pack coefficients into one integer, ``width`` bytes per slot."""
    if not coeffs:
        return 0
    return int.from_bytes(b"".join(int(c).to_bytes(width, "little") for c in coeffs), "little")


def unpack(value: int, count: int, width: int) -> list[int]:
    value = int(value)
    if value.bit_length() > count * width * 8:
        raise OverflowError("packed value has more slots than requested")
    buf = value.to_bytes(count * width, "little")
    return [int.from_bytes(buf[i * width:(i + 1) * width], "little") for i in range(count)]


def mul(p: WeightEnum, q: WeightEnum) -> WeightEnum:
    if not p.coeffs or not q.coeffs:
        return WeightEnum()
    if len(p.coeffs) == 1 or len(q.coeffs) == 1:
        (s,), other = (p.coeffs, q.coeffs) if len(p.coeffs) == 1 else (q.coeffs, p.coeffs)
        return WeightEnum(c * s for c in other)
    bits = (max(p.coeffs).bit_length() + max(q.coeffs).bit_length()
            + min(len(p.coeffs), len(q.coeffs)).bit_length())
    width = slot_bytes(bits)
    prod = mpz(pack(p.coeffs, width)) * mpz(pack(q.coeffs, width))
    return WeightEnum(unpack(prod, len(p.coeffs) + len(q.coeffs) - 1, width))


def erasure_fractions(p: WeightEnum, n: int) -> np.ndarray:
    """``A_w / C(n, w)`` for ``w = 0..n`` as floats (exact big-integer division)."""
    if p.degree > n:
        raise ValueError(f"degree {p.degree} exceeds ambient size {n}")
    out = np.zeros(n + 1)
    for w, c in enumerate(p.coeffs):
        if c:
            out[w] = c / math.comb(n, w)
    return out


def erasure_curve(p: WeightEnum, n: int, z) -> np.ndarray:
    """Vectorised :func:`eval_erasure` over an array of probabilities."""
    z = np.asarray(z, dtype=float)
    frac = erasure_fractions(p, n)
    w = np.arange(n + 1).reshape((-1,) + (1,) * z.ndim)
    return np.sum(frac.reshape(w.shape) * binom.pmf(w, n, z), axis=0)


def eval_erasure(p: WeightEnum, n: int, z: float) -> float:
    """``sum_w A_w z^w (1-z)^(n-w)``.

    Each term is ``(A_w / C(n,w))`` times a binomial probability, so every
    summand is nonnegative and no cancellation occurs.
    """
    if not 0.0 <= z <= 1.0:
        raise ValueError(f"z must lie in [0, 1], got {z}")
    frac = erasure_fractions(p, n)
    pmf = binom.pmf(np.arange(n + 1), n, z)
    return math.fsum((frac * pmf).tolist())
