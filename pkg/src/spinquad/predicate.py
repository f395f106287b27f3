"""General rotational predicates and their spin-quadric matrices.

A general predicate for a stationary segment KL and a rotating segment AB is

    G_s = (K x L) . Rot_s(A - B) + (K - L) . Rot_s(A x B) + c

With P = K x L, Q = A - B, U = K - L, V = A x B this is
``P . Rot_s(Q) + U . Rot_s(V) + c``, a quadratic form in the spinor
coordinates ``(s12, s23, s31, s0)`` (that order, everywhere).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Tuple

import numpy as np

from . import clifford
from .errors import InvalidReducedPredicate, ZeroSpinor, ZeroVector
from .rational import Number, RationalVec3, as_rational, sqrt_float


class Spinor(NamedTuple):
    s12: float
    s23: float
    s31: float
    s0: float


IDENTITY = Spinor(0.0, 0.0, 0.0, 1.0)


@dataclass(frozen=True)
class GeneralPredicate:
    K: RationalVec3
    L: RationalVec3
    A: RationalVec3
    B: RationalVec3
    c: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "c", as_rational(self.c))


@dataclass(frozen=True)
class ReducedPredicate:
    P: RationalVec3
    Q: RationalVec3
    U: RationalVec3
    V: RationalVec3
    c: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "c", as_rational(self.c))
        if self.P.dot(self.U) != 0 or self.Q.dot(self.V) != 0:
            raise InvalidReducedPredicate(
                f"P.U = {self.P.dot(self.U)}, Q.V = {self.Q.dot(self.V)}; both must be 0"
            )

    @property
    def a2(self) -> Fraction:
        return self.P.norm2() * self.Q.norm2()

    @property
    def b2(self) -> Fraction:
        return self.U.norm2() * self.V.norm2()

    def swapped(self) -> "ReducedPredicate":
        """Exchange the (P, Q) and (U, V) pairs; the matrix is unchanged."""
        return ReducedPredicate(self.U, self.V, self.P, self.Q, self.c)


@dataclass(frozen=True)
class DerivedQuantities:
    R: RationalVec3
    Rtilde: RationalVec3
    H: RationalVec3
    T: Fraction
    Ttilde: Fraction
    a2: Fraction
    b2: Fraction


@dataclass(frozen=True)
class SpinMatrix:
    """Exact symmetric 4x4 matrix in the basis (s12, s23, s31, s0)."""

    rows: Tuple[Tuple[Fraction, ...], ...]

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self.rows[i][j]

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.rows])

    def is_symmetric(self) -> bool:
        return all(self.rows[i][j] == self.rows[j][i] for i in range(4) for j in range(4))


class Kind(enum.Enum):
    IMPROPER = "improper"
    TOROIDAL = "toroidal"
    ELLIPSOIDAL = "ellipsoidal"


@dataclass(frozen=True)
class PredicateKind:
    """Predicate type; for toroidal predicates ``side`` names the non-vanishing pair."""

    tag: Kind
    side: Optional[str] = None

    @property
    def zero_side(self) -> Optional[str]:
        if self.side is None:
            return None
        return "UV" if self.side == "PQ" else "PQ"

    @property
    def is_proper(self) -> bool:
        return self.tag is not Kind.IMPROPER

    def __str__(self) -> str:
        if self.tag is Kind.TOROIDAL:
            return f"toroidal-{self.side.lower()}"
        return self.tag.value


def reduce(g: GeneralPredicate) -> ReducedPredicate:
    return ReducedPredicate(
        P=g.K.cross(g.L),
        Q=g.A - g.B,
        U=g.K - g.L,
        V=g.A.cross(g.B),
        c=g.c,
    )


def make_reduced(P, Q, U, V, c: Number = 0) -> ReducedPredicate:
    """Convenience constructor from plain coordinate triples."""
    return ReducedPredicate(
        RationalVec3.of(P), RationalVec3.of(Q), RationalVec3.of(U), RationalVec3.of(V), c
    )


def derived_quantities(r: ReducedPredicate) -> DerivedQuantities:
    P, Q, U, V = r.P, r.Q, r.U, r.V
    pq, uv = P.cross(Q), U.cross(V)
    return DerivedQuantities(
        R=pq + uv,
        Rtilde=pq - uv,
        H=P.cross(U).cross(Q.cross(V)),
        T=P.dot(Q) + U.dot(V),
        Ttilde=P.dot(Q) - U.dot(V),
        a2=r.a2,
        b2=r.b2,
    )


def assemble_matrix(r: ReducedPredicate) -> SpinMatrix:
    P, Q, U, V, c = r.P, r.Q, r.U, r.V, r.c
    d = derived_quantities(r)
    R1, R2, R3 = d.R
    T = d.T

    def s(i: int, j: int) -> Fraction:
        # 2 (P_i Q_j + U_i V_j), 1-based component indices
        return 2 * (P[i - 1] * Q[j - 1] + U[i - 1] * V[j - 1])

    a11 = s(3, 3) - T + c
    a22 = s(1, 1) - T + c
    a33 = s(2, 2) - T + c
    a44 = T + c
    a12 = s(1, 3) + R2
    a13 = s(3, 2) + R1
    a23 = s(2, 1) + R3
    rows = (
        (a11, a12, a13, R3),
        (a12, a22, a23, R1),
        (a13, a23, a33, R2),
        (R3, R1, R2, a44),
    )
    return SpinMatrix(rows)


def evaluate_predicate_direct(r: ReducedPredicate, s) -> float:
    """``P . Rot_s(Q) + U . Rot_s(V) + c`` via the Clifford sandwich product."""
    s = np.asarray(s, dtype=float)
    if not np.any(s):
        raise ZeroSpinor("spinor has zero norm")
    rq = clifford.rotate(s, r.Q.to_numpy())
    rv = clifford.rotate(s, r.V.to_numpy())
    return float(r.P.to_numpy() @ rq + r.U.to_numpy() @ rv + float(r.c))


def evaluate_quadratic_form(M, s) -> float:
    m = M.to_numpy() if isinstance(M, SpinMatrix) else np.asarray(M, dtype=float)
    s = np.asarray(s, dtype=float)
    return float(s @ m @ s)


def classify_predicate(r: ReducedPredicate) -> PredicateKind:
    a_zero = r.a2 == 0
    b_zero = r.b2 == 0
    if a_zero and b_zero:
        return PredicateKind(Kind.IMPROPER)
    if a_zero:
        return PredicateKind(Kind.TOROIDAL, "UV")
    if b_zero:
        return PredicateKind(Kind.TOROIDAL, "PQ")
    return PredicateKind(Kind.ELLIPSOIDAL)


def normalize_vector(v: RationalVec3) -> np.ndarray:
    if v.is_zero():
        raise ZeroVector("cannot normalize the zero vector")
    return v.to_numpy() / sqrt_float(v.norm2())
