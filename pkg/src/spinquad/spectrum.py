"""Closed-form eigenstructure of spin-quadric matrices.

Eigenvalues are ``c - (alpha*a + beta*b)`` with ``a = |P||Q|`` and
``b = |U||V|``. Columns of every eigenframe follow the label order
(+,+), (+,-), (-,+), (-,-).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import clifford
from .errors import DegenerateEigenvector, ImproperPredicate, NoEigenplane
from .predicate import (
    Kind,
    ReducedPredicate,
    assemble_matrix,
    classify_predicate,
    normalize_vector,
)
from .rational import as_rational, sqrt_float

LABELS: Tuple[Tuple[int, int], ...] = ((1, 1), (1, -1), (-1, 1), (-1, -1))

W0_TOL = 1e-12
NONZERO_TOL = 1e-6
ANGLE_TOL = 1e-6
RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class Spectrum:
    a2: Fraction
    b2: Fraction
    c: Fraction
    a: float
    b: float
    lambdas: Tuple[float, float, float, float]
    labels: Tuple[Tuple[int, int], ...] = LABELS

    def exact_groups(self) -> List[List[int]]:
        """Column indices grouped by exactly equal eigenvalue, in label order."""
        groups: List[List[int]] = []
        keys: List[Tuple[int, int]] = []
        for i, (al, be) in enumerate(self.labels):
            # gamma = al*a + be*b; two labels coincide iff the gammas agree exactly
            key = _gamma_key(al, be, self.a2, self.b2)
            for g, k in zip(groups, keys):
                if _same_gamma(k, key, self.a2, self.b2):
                    g.append(i)
                    break
            else:
                groups.append([i])
                keys.append(key)
        return groups


def _gamma_key(al: int, be: int, a2: Fraction, b2: Fraction) -> Tuple[int, int]:
    return (al if a2 != 0 else 0, be if b2 != 0 else 0)


def _same_gamma(k1, k2, a2: Fraction, b2: Fraction) -> bool:
    if k1 == k2:
        return True
    # al1*a + be1*b == al2*a + be2*b  <=>  (al1-al2)*a == (be2-be1)*b
    da, db = k1[0] - k2[0], k2[1] - k1[1]
    if da == 0 or db == 0:
        return False
    return da * db > 0 and a2 == b2


@dataclass(frozen=True)
class Eigenplane:
    u: np.ndarray
    v: np.ndarray
    lam: float
    source: str


@dataclass(frozen=True)
class EigenFrame:
    Q: np.ndarray
    lambdas: Tuple[float, float, float, float]
    labels: Tuple[Tuple[int, int], ...]
    det_sign: int
    methods: Tuple[str, ...] = field(default=())

    def column(self, j: int) -> np.ndarray:
        return self.Q[:, j]

    def reconstruct(self) -> np.ndarray:
        return self.Q @ np.diag(self.lambdas) @ self.Q.T


def eigenvalues(r: ReducedPredicate) -> Spectrum:
    a2, b2 = r.a2, r.b2
    a, b = sqrt_float(a2), sqrt_float(b2)
    c = float(r.c)
    lambdas = tuple(c - (al * a + be * b) for al, be in LABELS)
    return Spectrum(a2=a2, b2=b2, c=r.c, a=a, b=b, lambdas=lambdas)


def _det3(m) -> Fraction:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def det4(m) -> Fraction:
    """Exact determinant by Laplace expansion along the fourth row."""
    total = Fraction(0)
    for j in range(4):
        if m[3][j] == 0:
            continue
        minor = [[m[i][k] for k in range(4) if k != j] for i in range(3)]
        total += (-1) ** (3 + j) * m[3][j] * _det3(minor)
    return total


def characteristic_poly_check(r: ReducedPredicate, gamma) -> Tuple[Fraction, Fraction]:
    """Return ``(det(M - (c - gamma) I), h(gamma))``; the two agree exactly."""
    gamma = as_rational(gamma)
    M = assemble_matrix(r)
    lam = r.c - gamma
    shifted = [[M[i, j] - (lam if i == j else 0) for j in range(4)] for i in range(4)]
    a2, b2 = r.a2, r.b2
    h = gamma**4 - 2 * (a2 + b2) * gamma**2 + (a2 - b2) ** 2
    return det4(shifted), h


def _require(r: ReducedPredicate, tag: Kind) -> None:
    kind = classify_predicate(r)
    if kind.tag is not tag:
        raise ValueError(f"expected a {tag.value} predicate, got {kind}")


def eigenvector_ellipsoidal(r: ReducedPredicate, alpha: int, beta: int) -> np.ndarray:
    """Pinor eigenvector ``1 - ab PUQV - a PQ - b UV`` of normalized vectors.

    Returned unnormalized; ``|W|^2 == 4 W[3]`` holds. Raises
    :class:`DegenerateEigenvector` when the scalar part vanishes.
    """
    _require(r, Kind.ELLIPSOIDAL)
    p, q, u, v = (clifford.vector(normalize_vector(x)) for x in (r.P, r.Q, r.U, r.V))
    one = np.zeros(8)
    one[0] = 1.0
    w = (
        one
        - alpha * beta * clifford.gp(clifford.gp(clifford.gp(p, u), q), v)
        - alpha * clifford.gp(p, q)
        - beta * clifford.gp(u, v)
    )
    W = clifford.spinor_coords(w)
    if W[3] <= W0_TOL:
        raise DegenerateEigenvector(f"w0 = {W[3]:.3e} for (alpha, beta) = ({alpha}, {beta})")
    return W


def _z_plane(P: np.ndarray, Q: np.ndarray, alpha: int, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """Closed-form toroidal eigenplane Z^(k), k in 1..3, for the (P, Q) pair."""
    P1, P2, P3 = P
    Q1, Q2, Q3 = Q
    Pk, Qk = P[k - 1], Q[k - 1]
    g = P2 * Pk - Q2 * Qk - alpha * (P2 * Qk - Pk * Q2)
    u = np.array([
        g,
        0.0,
        -P3 * Pk + Q3 * Qk + alpha * (P3 * Qk - Pk * Q3),
        -P1 * Pk - Q1 * Qk + alpha * (P1 * Qk + Pk * Q1),
    ])
    v = np.array([
        0.0,
        g,
        -P1 * Pk + Q1 * Qk + alpha * (P1 * Qk - Pk * Q1),
        P3 * Pk + Q3 * Qk - alpha * (P3 * Qk + Pk * Q3),
    ])
    return u, v


def _special_planes(Q: np.ndarray) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Planes for P = +-Q: span{e0, n} and the complement of n = (Q3, Q1, Q2) in the bivector part.

    The complement is listed by its two usual spanning vectors, which become
    dependent when Q3 = 0; the third cyclic vector covers that case.
    """
    Q1, Q2, Q3 = Q
    c1 = np.array([-Q2, 0.0, Q3, 0.0])
    c2 = np.array([-Q1, Q3, 0.0, 0.0])
    c3 = np.array([0.0, -Q2, Q1, 0.0])
    return [
        (np.array([0.0, 0.0, 0.0, 1.0]), np.array([Q3, Q1, Q2, 0.0])),
        (c1, c2),
        (c1, c3),
        (c2, c3),
    ]


def _independent(u: np.ndarray, v: np.ndarray) -> bool:
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu <= NONZERO_TOL or nv <= NONZERO_TOL:
        return False
    cos = abs(u @ v) / (nu * nv)
    return np.sqrt(max(0.0, 1.0 - cos * cos)) > ANGLE_TOL


def _residual_ok(M: np.ndarray, lam: float, z: np.ndarray) -> bool:
    bound = RESIDUAL_TOL * (1.0 + np.linalg.norm(M, 2))
    return np.linalg.norm(M @ z - lam * z) <= bound


def _projector_plane(M: np.ndarray, other: float) -> Tuple[np.ndarray, np.ndarray]:
    """Two columns of ``M - other*I`` spanning its rank-2 image.

    With exactly two doubled eigenvalues, that image is the eigenplane of the
    eigenvalue different from ``other``.
    """
    A = M - other * np.eye(4)
    cols = [A[:, j] for j in range(4)]
    i = max(range(4), key=lambda j: np.linalg.norm(cols[j]))
    u = cols[i]
    nu = np.linalg.norm(u)
    if nu == 0.0:
        return u, u

    def perp(j: int) -> float:
        w = cols[j] - (u @ cols[j]) / (nu * nu) * u
        return np.linalg.norm(w)

    j = max((j for j in range(4) if j != i), key=perp)
    return u, cols[j]


def eigenplanes_toroidal(r: ReducedPredicate, alpha: int) -> Eigenplane:
    """Eigenplane of the doubled eigenvalue ``c - alpha*m`` (m the non-zero product).

    The closed forms are written for a vanishing (U, V) pair; when (P, Q)
    vanishes instead the two pairs are swapped first.
    """
    kind = classify_predicate(r)
    if kind.tag is not Kind.TOROIDAL:
        raise ValueError(f"expected a toroidal predicate, got {kind}")
    M = assemble_matrix(r).to_numpy()
    active = r if kind.side == "PQ" else r.swapped()
    m = sqrt_float(active.a2)
    lam = float(r.c) - alpha * m
    P, Q = normalize_vector(active.P), normalize_vector(active.Q)

    for k in (1, 2, 3):
        u, v = _z_plane(P, Q, alpha, k)
        if _independent(u, v) and _residual_ok(M, lam, u) and _residual_ok(M, lam, v):
            return Eigenplane(u, v, lam, f"Z{k}")
    for i, (u, v) in enumerate(_special_planes(Q), start=1):
        if _independent(u, v) and _residual_ok(M, lam, u) and _residual_ok(M, lam, v):
            return Eigenplane(u, v, lam, f"special{i}")
    u, v = _projector_plane(M, float(r.c) + alpha * m)
    if _independent(u, v) and _residual_ok(M, lam, u) and _residual_ok(M, lam, v):
        return Eigenplane(u, v, lam, "projector")
    raise NoEigenplane(f"no closed-form eigenplane for alpha={alpha}")


def _gram_schmidt(vectors: Sequence[np.ndarray]) -> List[np.ndarray]:
    out: List[np.ndarray] = []
    for v in vectors:
        w = np.array(v, dtype=float)
        for e in out:
            w = w - (e @ w) * e
        n = np.linalg.norm(w)
        if n > NONZERO_TOL * max(1.0, np.linalg.norm(v)):
            out.append(w / n)
    return out


def numeric_nullspace(M: np.ndarray, lam: float, k: int) -> List[np.ndarray]:
    """The k right singular vectors of ``M - lam I`` with smallest singular values."""
    _, _, vh = np.linalg.svd(M - lam * np.eye(4))
    return [vh[-1 - i] for i in range(k)][::-1]


def orthonormal_frame(r: ReducedPredicate) -> EigenFrame:
    kind = classify_predicate(r)
    if kind.tag is Kind.IMPROPER:
        raise ImproperPredicate("improper predicates have no distinguished eigenframe")
    M = assemble_matrix(r).to_numpy()
    spec = eigenvalues(r)
    cols: Dict[int, np.ndarray] = {}
    methods: Dict[int, str] = {}

    if kind.tag is Kind.ELLIPSOIDAL:
        candidates: Dict[int, Optional[np.ndarray]] = {}
        for i, (al, be) in enumerate(LABELS):
            try:
                candidates[i] = eigenvector_ellipsoidal(r, al, be)
            except DegenerateEigenvector:
                candidates[i] = None
        for group in spec.exact_groups():
            vecs = [candidates[i] for i in group]
            basis = _gram_schmidt([v for v in vecs if v is not None])
            method = "pinor"
            if len(basis) < len(group) or not all(
                _residual_ok(M, spec.lambdas[group[0]], e) for e in basis
            ):
                basis = numeric_nullspace(M, spec.lambdas[group[0]], len(group))
                method = "nullspace"
            for i, e in zip(group, basis):
                cols[i], methods[i] = e, method
    else:
        for group in spec.exact_groups():
            lam_label = LABELS[group[0]]
            alpha = lam_label[0] if kind.side == "PQ" else lam_label[1]
            try:
                plane = eigenplanes_toroidal(r, alpha)
                basis = _gram_schmidt([plane.u, plane.v])
                method = plane.source
                if len(basis) < 2:
                    raise NoEigenplane("plane vectors dependent after orthogonalization")
            except NoEigenplane:
                basis = numeric_nullspace(M, spec.lambdas[group[0]], 2)
                method = "nullspace"
            for i, e in zip(group, basis):
                cols[i], methods[i] = e, method

    Qm = np.column_stack([cols[i] for i in range(4)])
    det = np.linalg.det(Qm)
    return EigenFrame(
        Q=Qm,
        lambdas=spec.lambdas,
        labels=LABELS,
        det_sign=1 if det >= 0 else -1,
        methods=tuple(methods[i] for i in range(4)),
    )
