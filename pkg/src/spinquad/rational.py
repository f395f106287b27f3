"""Exact rational scalars and 3-vectors.

All scene data lives in Q. Scalars are :class:`fractions.Fraction`, which is
always kept in lowest terms with a positive denominator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

Number = Union[int, Fraction, str]


def as_rational(value: Number) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` literal to a Fraction.

    Floats are rejected: they would silently smuggle rounding into exact data.
    """
    if isinstance(value, bool):
        raise TypeError("bool is not a rational scalar")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected int, Fraction or str, got {type(value).__name__}")


@dataclass(frozen=True)
class RationalVec3:
    x: Fraction
    y: Fraction
    z: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", as_rational(self.x))
        object.__setattr__(self, "y", as_rational(self.y))
        object.__setattr__(self, "z", as_rational(self.z))

    @classmethod
    def of(cls, values: Iterable[Number]) -> "RationalVec3":
        x, y, z = values
        return cls(x, y, z)

    @classmethod
    def zero(cls) -> "RationalVec3":
        return cls(0, 0, 0)

    def __iter__(self):
        yield self.x
        yield self.y
        yield self.z

    def __getitem__(self, i: int) -> Fraction:
        return (self.x, self.y, self.z)[i]

    def __add__(self, other: "RationalVec3") -> "RationalVec3":
        return RationalVec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "RationalVec3") -> "RationalVec3":
        return RationalVec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "RationalVec3":
        return RationalVec3(-self.x, -self.y, -self.z)

    def scale(self, k: Number) -> "RationalVec3":
        k = as_rational(k)
        return RationalVec3(k * self.x, k * self.y, k * self.z)

    def dot(self, other: "RationalVec3") -> Fraction:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "RationalVec3") -> "RationalVec3":
        return RationalVec3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm2(self) -> Fraction:
        return self.dot(self)

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0 and self.z == 0

    def to_numpy(self) -> np.ndarray:
        return np.array([float(self.x), float(self.y), float(self.z)])


def sqrt_float(q: Fraction) -> float:
    """Square root of a non-negative rational, correctly rounded for huge terms."""
    if q < 0:
        raise ValueError("negative radicand")
    if q == 0:
        return 0.0
    try:
        return math.sqrt(float(q))
    except OverflowError:
        # float(q) overflows only for enormous numerators; fall back to integer sqrt
        num, den = q.numerator, q.denominator
        return math.isqrt(num * den) / den


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def sign_surd(p: Fraction, q: Fraction, m: Fraction) -> int:
    """Exact sign of ``p + q*sqrt(m)`` for rationals p, q and m >= 0."""
    if m < 0:
        raise ValueError("negative radicand")
    sp = _sign(p)
    sq = _sign(q) if m != 0 else 0
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    # opposite signs: the larger magnitude wins
    d = p * p - q * q * m
    if d == 0:
        return 0
    return sp if d > 0 else sq


def sign_surd2(p: Fraction, q: Fraction, m: Fraction, r: Fraction, n: Fraction) -> int:
    """Exact sign of ``p + q*sqrt(m) + r*sqrt(n)`` for m, n >= 0."""
    if n < 0:
        raise ValueError("negative radicand")
    sx = sign_surd(p, q, m)
    sy = _sign(r) if n != 0 else 0
    if sy == 0:
        return sx
    if sx == 0 or sx == sy:
        return sy
    # X = p + q sqrt(m), Y = r sqrt(n); compare X^2 with Y^2
    d = sign_surd(p * p + q * q * m - r * r * n, 2 * p * q, m)
    if d == 0:
        return 0
    return sx if d > 0 else sy
