"""Minimal Euclidean Clifford algebra Cl(3,0).

Multivectors are length-8 float arrays indexed by blade bitmask
(bit 0 = e1, bit 1 = e2, bit 2 = e3), so index 3 is e12, 5 is e13, 6 is e23
and 7 is the pseudoscalar e123. Spinor coordinates use the bivector basis
(e12, e23, e31) with e31 = -e13.
"""
from __future__ import annotations

import numpy as np

_GRADE = np.array([bin(i).count("1") for i in range(8)])


def _reorder_sign(a: int, b: int) -> int:
    a >>= 1
    swaps = 0
    while a:
        swaps += bin(a & b).count("1")
        a >>= 1
    return -1 if swaps & 1 else 1


_SIGN = np.array([[_reorder_sign(a, b) for b in range(8)] for a in range(8)], dtype=float)


def gp(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Geometric product of two multivectors."""
    out = np.zeros(8)
    for a in np.flatnonzero(x):
        for b in np.flatnonzero(y):
            out[a ^ b] += _SIGN[a, b] * x[a] * y[b]
    return out


def vector(v) -> np.ndarray:
    out = np.zeros(8)
    out[1], out[2], out[4] = v[0], v[1], v[2]
    return out


def vector_part(m: np.ndarray) -> np.ndarray:
    return np.array([m[1], m[2], m[4]])


def reverse(m: np.ndarray) -> np.ndarray:
    # grades 2 and 3 flip sign under reversion
    return m * np.where((_GRADE == 2) | (_GRADE == 3), -1.0, 1.0)


def spinor(s) -> np.ndarray:
    """Multivector for spinor coordinates ``(s12, s23, s31, s0)``."""
    s12, s23, s31, s0 = s
    out = np.zeros(8)
    out[0] = s0
    out[3] = s12
    out[6] = s23
    out[5] = -s31
    return out


def spinor_coords(m: np.ndarray) -> np.ndarray:
    """Even-part coordinates ``(m12, m23, m31, m0)`` of a multivector."""
    return np.array([m[3], m[6], -m[5], m[0]])


def rotate(s, v) -> np.ndarray:
    """Rotate 3-vector ``v`` by spinor ``s`` as ``s v s^-1``."""
    sm = spinor(s)
    norm2 = float(np.dot(s, s))
    if norm2 == 0.0:
        raise ZeroDivisionError("zero spinor has no inverse")
    inv = reverse(sm) / norm2
    return vector_part(gp(gp(sm, vector(v)), inv))
