"""Case dispatch, chart evaluation and grid sampling of spin-quadrics.

In eigenframe coordinates ``t = (x, y, z, w)`` a proper predicate's surface is

    (a+b) x^2 + (a-b) y^2 + (b-a) z^2 - (a+b) w^2 = c,   |t| = 1,

which falls into one of 11 ellipsoidal or 7 toroidal parameterization types.
Type boundaries are decided exactly on (a^2, b^2, c); the charts themselves are
evaluated in floating point and mapped back to spinors by ``s = Q t``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from .errors import EmptyCase, ImproperPredicate, NegativeRadicand, OutOfDomain
from .predicate import Kind, PredicateKind, ReducedPredicate, Spinor, classify_predicate
from .rational import as_rational, sign_surd, sign_surd2
from .spectrum import EigenFrame, eigenvalues, orthonormal_frame

RADICAND_TOL = 1e-12
W_SNAP = 64 * np.finfo(float).eps
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CaseMetadata:
    component_count: int
    dimension: int
    domain_hole: str
    is_manifold: bool


class ParamCase(enum.Enum):
    # (family, type number, label)
    EMPTY = ("ellipsoidal", 1, "empty")
    PAIR_OF_POINTS = ("ellipsoidal", 2, "pair of points")
    SEPARATE_ELLIPSOIDS = ("ellipsoidal", 3, "pair of separate ellipsoids")
    Y_TOUCHING = ("ellipsoidal", 4, "y-touching")
    YZ_CROSSED = ("ellipsoidal", 5, "yz-crossed")
    Z_TOUCHING = ("ellipsoidal", 6, "z-touching")
    Y_BARREL = ("ellipsoidal", 7, "y-barrel")
    Z_BARREL = ("ellipsoidal", 8, "z-barrel")
    NOTCHED_Y_BARREL = ("ellipsoidal", 9, "notched y-barrel")
    NOTCHED_Z_BARREL = ("ellipsoidal", 10, "notched z-barrel")
    YZ_CAPS = ("ellipsoidal", 11, "yz-caps")
    TORUS_EMPTY = ("toroidal", 1, "empty")
    XY_ZW_TORUS = ("toroidal", 2, "xy/zw-torus")
    XY_CIRCLE = ("toroidal", 3, "xy-circle")
    ZW_CIRCLE = ("toroidal", 4, "zw-circle")
    XZ_YW_TORUS = ("toroidal", 5, "xz/yw-torus")
    XZ_CIRCLE = ("toroidal", 6, "xz-circle")
    YW_CIRCLE = ("toroidal", 7, "yw-circle")

    @property
    def family(self) -> str:
        return self.value[0]

    @property
    def number(self) -> int:
        return self.value[1]

    @property
    def label(self) -> str:
        return self.value[2]

    @property
    def slug(self) -> str:
        return self.label.replace("/", "-").replace(" ", "-")

    @property
    def is_empty(self) -> bool:
        return self.number == 1

    @property
    def metadata(self) -> CaseMetadata:
        return _METADATA[self]

    def __str__(self) -> str:
        return self.label


_METADATA = {
    ParamCase.EMPTY: CaseMetadata(0, -1, "empty", True),
    ParamCase.PAIR_OF_POINTS: CaseMetadata(2, 0, "empty", True),
    ParamCase.SEPARATE_ELLIPSOIDS: CaseMetadata(2, 2, "empty", True),
    ParamCase.Y_TOUCHING: CaseMetadata(1, 2, "point-pair", False),
    ParamCase.YZ_CROSSED: CaseMetadata(1, 2, "circle", False),
    ParamCase.Z_TOUCHING: CaseMetadata(1, 2, "point-pair", False),
    ParamCase.Y_BARREL: CaseMetadata(1, 2, "deformed-ellipse", True),
    ParamCase.Z_BARREL: CaseMetadata(1, 2, "deformed-ellipse", True),
    ParamCase.NOTCHED_Y_BARREL: CaseMetadata(
        1, 2, "deformed-ellipse-pair-with-common-points", False
    ),
    ParamCase.NOTCHED_Z_BARREL: CaseMetadata(
        1, 2, "deformed-ellipse-pair-with-common-points", False
    ),
    ParamCase.YZ_CAPS: CaseMetadata(2, 2, "deformed-ellipse", True),
    ParamCase.TORUS_EMPTY: CaseMetadata(0, -1, "empty", True),
    ParamCase.XY_ZW_TORUS: CaseMetadata(1, 2, "empty", True),
    ParamCase.XY_CIRCLE: CaseMetadata(1, 1, "empty", True),
    ParamCase.ZW_CIRCLE: CaseMetadata(1, 1, "empty", True),
    ParamCase.XZ_YW_TORUS: CaseMetadata(1, 2, "empty", True),
    ParamCase.XZ_CIRCLE: CaseMetadata(1, 1, "empty", True),
    ParamCase.YW_CIRCLE: CaseMetadata(1, 1, "empty", True),
}

ELLIPSOIDAL_CASES = tuple(c for c in ParamCase if c.family == "ellipsoidal")
TOROIDAL_CASES = tuple(c for c in ParamCase if c.family == "toroidal")


def case_metadata(case: ParamCase) -> CaseMetadata:
    return case.metadata


def case_by_number(family: str, number: int) -> ParamCase:
    for case in ParamCase:
        if case.family == family and case.number == number:
            return case
    raise KeyError((family, number))


# -- exact dispatch ----------------------------------------------------------


def classify_case(a2, b2, c, kind: Optional[PredicateKind] = None) -> ParamCase:
    """Parameterization type for ``a = sqrt(a2)``, ``b = sqrt(b2)`` and ``c``.

    Every comparison of c against sums of the irrational a, b is decided
    exactly by sign analysis of ``p + q sqrt(a2) + r sqrt(b2)``.
    """
    a2, b2, c = as_rational(a2), as_rational(b2), as_rational(c)
    if a2 < 0 or b2 < 0:
        raise ValueError("squared magnitudes must be non-negative")
    if a2 == 0 and b2 == 0:
        raise ImproperPredicate("improper predicate has no parameterization type")
    if kind is not None and not kind.is_proper:
        raise ImproperPredicate("improper predicate has no parameterization type")

    if a2 == 0 or b2 == 0:
        m2 = a2 if b2 == 0 else b2
        pq_side = b2 == 0
        lower = sign_surd(c, Fraction(1), m2)  # c + m
        upper = sign_surd(c, Fraction(-1), m2)  # c - m
        if lower < 0 or upper > 0:
            return ParamCase.TORUS_EMPTY
        if lower == 0:
            return ParamCase.ZW_CIRCLE if pq_side else ParamCase.YW_CIRCLE
        if upper == 0:
            return ParamCase.XY_CIRCLE if pq_side else ParamCase.XZ_CIRCLE
        return ParamCase.XY_ZW_TORUS if pq_side else ParamCase.XZ_YW_TORUS

    one = Fraction(1)
    s = sign_surd2(c, one, a2, one, b2)  # c + a + b
    if s < 0:
        return ParamCase.EMPTY
    if s == 0:
        return ParamCase.PAIR_OF_POINTS

    ab = (a2 > b2) - (a2 < b2)  # sign(a - b)
    # c + |a - b| and c - |a - b|
    if ab >= 0:
        lo = sign_surd2(c, one, a2, -one, b2)
        hi = sign_surd2(c, -one, a2, one, b2)
    else:
        lo = sign_surd2(c, -one, a2, one, b2)
        hi = sign_surd2(c, one, a2, -one, b2)

    if lo < 0:
        return ParamCase.SEPARATE_ELLIPSOIDS
    if lo == 0:
        return {-1: ParamCase.Y_TOUCHING, 0: ParamCase.YZ_CROSSED, 1: ParamCase.Z_TOUCHING}[ab]
    if hi < 0:
        return ParamCase.Y_BARREL if ab < 0 else ParamCase.Z_BARREL
    if hi == 0 and ab != 0:
        return ParamCase.NOTCHED_Y_BARREL if ab < 0 else ParamCase.NOTCHED_Z_BARREL
    if sign_surd2(c, -one, a2, -one, b2) <= 0:  # c - a - b
        return ParamCase.YZ_CAPS
    return ParamCase.EMPTY


def classify_reduced(r: ReducedPredicate) -> ParamCase:
    return classify_case(r.a2, r.b2, r.c, classify_predicate(r))


# -- chart evaluation ----------------------------------------------------------


@dataclass(frozen=True)
class ChartParams:
    """Chart coordinates: angle ``alpha``, ``second`` (beta or h), cap ``sigma``, w branch."""

    alpha: float = 0.0
    second: Optional[float] = None
    sigma: int = 1
    wsign: int = 1


@dataclass(frozen=True)
class ChartPoint:
    t: np.ndarray
    params: ChartParams
    chart: str


def _root(x: float) -> float:
    if x < -RADICAND_TOL:
        raise NegativeRadicand(f"radicand {x:.3e} is negative")
    return math.sqrt(x) if x > 0.0 else 0.0


def _wroot(x: float) -> float:
    """``w`` from ``1 - |xyz|^2``; rounding noise on the domain hole is snapped to 0."""
    return 0.0 if abs(x) <= W_SNAP else _root(x)


def _check_sign(name: str, v: int) -> None:
    if v not in (-1, 1):
        raise OutOfDomain(f"{name} must be -1 or 1, got {v}")


def _check_interval(name: str, v: Optional[float], lo: float, hi: float, closed_hi=True) -> float:
    if v is None:
        raise OutOfDomain(f"{name} is required for this chart")
    if not (lo <= v <= hi) or (not closed_hi and v == hi):
        raise OutOfDomain(f"{name}={v} outside [{lo}, {hi}{']' if closed_hi else ')'}")
    return float(v)


def _ellipsoid(a, b, c, al, be, ws):
    s = a + b + c
    x = _root(s / (2 * (a + b))) * math.sin(be) * math.cos(al)
    y = _root(s / (2 * a)) * math.sin(be) * math.sin(al)
    z = _root(s / (2 * b)) * math.cos(be)
    w = ws * _wroot(1.0 - x * x - y * y - z * z)
    return x, y, z, w


def _y_barrel(a, b, c, al, h, ws):
    u = _root((b - a + c) / (2 * b)) * math.cos(al)
    v = _root((b - a + c) / (2 * (b - a))) * math.sin(al)
    den = 2 * (a * h * h + (a * (1 - h * h) + b) * u * u + (b - a * h * h) * v * v)
    k = _root((a + b + c) / den)
    x = u * k
    y = h * k * _root(1.0 - u * u - v * v)
    z = v * k
    w = ws * _wroot(1.0 - k * k * (h * h + (1 - h * h) * (u * u + v * v)))
    return x, y, z, w


def _z_barrel(a, b, c, al, h, ws):
    # the v radius divides by 2(a - b): a > b throughout this case
    u = _root((a - b + c) / (2 * a)) * math.cos(al)
    v = _root((a - b + c) / (2 * (a - b))) * math.sin(al)
    den = 2 * (b * h * h + (b * (1 - h * h) + a) * u * u + (a - b * h * h) * v * v)
    k = _root((a + b + c) / den)
    x = u * k
    y = v * k
    z = h * k * _root(1.0 - u * u - v * v)
    w = ws * _wroot(1.0 - k * k * (h * h + (1 - h * h) * (u * u + v * v)))
    return x, y, z, w


def _yz_caps(a, b, c, al, h, sg, ws):
    u = _root((a + b - c) / (2 * b)) * math.cos(al)
    v = _root((a + b - c) / (2 * a)) * math.sin(al)
    den = 2 * (a + b - (a * (1 - h * h) + b) * u * u - (b * (1 - h * h) + a) * v * v)
    k = _root((a + b + c) / den)
    x = sg * k * _root(1.0 - u * u - v * v)
    y = h * k * u
    z = h * k * v
    w = ws * _wroot(1.0 - k * k * (1 - (1 - h * h) * (u * u + v * v)))
    return x, y, z, w


def chart_id(case: ParamCase, params: ChartParams) -> str:
    if case in (ParamCase.XY_ZW_TORUS, ParamCase.XZ_YW_TORUS) or case.metadata.dimension == 1:
        return case.slug
    w = "w+" if params.wsign > 0 else "w-"
    if case is ParamCase.YZ_CAPS:
        return f"{case.slug}.s{'+' if params.sigma > 0 else '-'}.{w}"
    return f"{case.slug}.{w}"


def eval_t(case: ParamCase, a: float, b: float, c: float, params: ChartParams) -> ChartPoint:
    """Evaluate the chart of ``case`` at ``params``; returns a point of the t-system."""
    if case.is_empty:
        raise EmptyCase(f"case '{case}' has no points")
    a, b, c = float(a), float(b), float(c)
    al = params.alpha
    _check_sign("wsign", params.wsign)
    _check_sign("sigma", params.sigma)
    if case is not ParamCase.PAIR_OF_POINTS:
        al = _check_interval("alpha", al, 0.0, TWO_PI, closed_hi=False)

    if case is ParamCase.PAIR_OF_POINTS:
        t = (0.0, 0.0, 0.0, float(params.wsign))
    elif case in (
        ParamCase.SEPARATE_ELLIPSOIDS,
        ParamCase.Y_TOUCHING,
        ParamCase.YZ_CROSSED,
        ParamCase.Z_TOUCHING,
    ):
        be = _check_interval("beta", params.second, 0.0, math.pi)
        t = _ellipsoid(a, b, c, al, be, params.wsign)
    elif case in (ParamCase.Y_BARREL, ParamCase.NOTCHED_Y_BARREL):
        h = _check_interval("h", params.second, -1.0, 1.0)
        t = _y_barrel(a, b, c, al, h, params.wsign)
    elif case in (ParamCase.Z_BARREL, ParamCase.NOTCHED_Z_BARREL):
        h = _check_interval("h", params.second, -1.0, 1.0)
        t = _z_barrel(a, b, c, al, h, params.wsign)
    elif case is ParamCase.YZ_CAPS:
        h = _check_interval("h", params.second, 0.0, 1.0)
        t = _yz_caps(a, b, c, al, h, params.sigma, params.wsign)
    elif case is ParamCase.XY_ZW_TORUS:
        be = _check_interval("beta", params.second, 0.0, TWO_PI, closed_hi=False)
        r1, r2 = _root((a + c) / (2 * a)), _root((a - c) / (2 * a))
        t = (r1 * math.cos(al), r1 * math.sin(al), r2 * math.cos(be), r2 * math.sin(be))
    elif case is ParamCase.XZ_YW_TORUS:
        be = _check_interval("beta", params.second, 0.0, TWO_PI, closed_hi=False)
        r1, r2 = _root((b + c) / (2 * b)), _root((b - c) / (2 * b))
        t = (r1 * math.cos(al), r2 * math.cos(be), r1 * math.sin(al), r2 * math.sin(be))
    elif case is ParamCase.XY_CIRCLE:
        r = _root((a + c) / (2 * a))
        t = (r * math.cos(al), r * math.sin(al), 0.0, 0.0)
    elif case is ParamCase.ZW_CIRCLE:
        r = _root((a - c) / (2 * a))
        t = (0.0, 0.0, r * math.cos(al), r * math.sin(al))
    elif case is ParamCase.XZ_CIRCLE:
        r = _root((b + c) / (2 * b))
        t = (r * math.cos(al), 0.0, r * math.sin(al), 0.0)
    elif case is ParamCase.YW_CIRCLE:
        r = _root((b - c) / (2 * b))
        t = (0.0, r * math.cos(al), 0.0, r * math.sin(al))
    else:  # pragma: no cover - exhaustive over ParamCase
        raise AssertionError(case)
    return ChartPoint(np.array(t, dtype=float), params, chart_id(case, params))


def eval_spinor(frame: EigenFrame, point) -> Spinor:
    t = point.t if isinstance(point, ChartPoint) else np.asarray(point, dtype=float)
    return Spinor(*map(float, frame.Q @ t))


# -- sampling ----------------------------------------------------------------


@dataclass(frozen=True)
class ChartGrid:
    """Layout of one chart branch inside a SampleSet (row-major over alpha)."""

    chart: str
    start: int
    shape: Tuple[int, int]
    periodic: Tuple[bool, bool]


@dataclass(frozen=True)
class Sample:
    spinor: Spinor
    chart: str
    params: ChartParams
    t: np.ndarray


@dataclass
class SampleSet:
    predicate: ReducedPredicate
    case: Optional[ParamCase]
    resolution: int
    samples: List[Sample] = field(default_factory=list)
    grids: List[ChartGrid] = field(default_factory=list)
    frame: Optional[EigenFrame] = None

    def __len__(self) -> int:
        return len(self.samples)

    def spinors(self) -> np.ndarray:
        if not self.samples:
            return np.zeros((0, 4))
        return np.array([s.spinor for s in self.samples])


def _branches(case: ParamCase) -> List[Tuple[int, int]]:
    """(sigma, wsign) pairs for a case's chart branches."""
    if case is ParamCase.YZ_CAPS:
        return [(1, 1), (1, -1), (-1, 1), (-1, -1)]
    if case.family == "toroidal":
        return [(1, 1)]
    return [(1, 1), (1, -1)]


def _second_axis(case: ParamCase, n: int) -> Tuple[Optional[np.ndarray], bool]:
    if case in (
        ParamCase.SEPARATE_ELLIPSOIDS,
        ParamCase.Y_TOUCHING,
        ParamCase.YZ_CROSSED,
        ParamCase.Z_TOUCHING,
    ):
        return np.linspace(0.0, math.pi, n), False
    if case in (
        ParamCase.Y_BARREL,
        ParamCase.Z_BARREL,
        ParamCase.NOTCHED_Y_BARREL,
        ParamCase.NOTCHED_Z_BARREL,
    ):
        return np.linspace(-1.0, 1.0, n), False
    if case is ParamCase.YZ_CAPS:
        return np.linspace(0.0, 1.0, n), False
    if case in (ParamCase.XY_ZW_TORUS, ParamCase.XZ_YW_TORUS):
        return TWO_PI * np.arange(n) / n, True
    return None, False


def sample_chart(
    pred: ReducedPredicate,
    case: Optional[ParamCase] = None,
    resolution: int = 16,
    frame: Optional[EigenFrame] = None,
) -> SampleSet:
    """Sample every chart branch of ``case`` on a uniform parameter grid.

    Periodic parameters use half-open grids so no seam column is repeated.
    Improper predicates and empty cases give an empty set.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    kind = classify_predicate(pred)
    if not kind.is_proper:
        return SampleSet(pred, None, resolution)
    if case is None:
        case = classify_case(pred.a2, pred.b2, pred.c, kind)
    out = SampleSet(pred, case, resolution)
    if case.is_empty:
        return out
    if frame is None:
        frame = orthonormal_frame(pred)
    out.frame = frame
    spec = eigenvalues(pred)
    a, b, c = spec.a, spec.b, float(pred.c)
    Qm = frame.Q

    def emit(params: ChartParams) -> None:
        pt = eval_t(case, a, b, c, params)
        out.samples.append(Sample(Spinor(*map(float, Qm @ pt.t)), pt.chart, params, pt.t))

    if case is ParamCase.PAIR_OF_POINTS:
        for ws in (1, -1):
            start = len(out.samples)
            emit(ChartParams(wsign=ws))
            out.grids.append(ChartGrid(out.samples[-1].chart, start, (1, 1), (False, False)))
        return out

    alphas = TWO_PI * np.arange(resolution) / resolution
    second, periodic2 = _second_axis(case, resolution)
    for sigma, ws in _branches(case):
        start = len(out.samples)
        for al in alphas:
            if second is None:
                emit(ChartParams(alpha=float(al), sigma=sigma, wsign=ws))
            else:
                for s2 in second:
                    emit(ChartParams(alpha=float(al), second=float(s2), sigma=sigma, wsign=ws))
        n2 = 1 if second is None else len(second)
        out.grids.append(
            ChartGrid(out.samples[start].chart, start, (resolution, n2), (True, periodic2))
        )
    return out
