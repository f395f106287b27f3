"""Scene files (``.csc``): predicates and triangle pairs with exact coordinates.

Line format, ``#`` starts a comment::

    predicate Kx Ky Kz  Lx Ly Lz  Ax Ay Az  Bx By Bz  c
    pquv      Px Py Pz  Qx Qy Qz  Ux Uy Uz  Vx Vy Vz  c
    tripair   <stationary v0 v1 v2>  <rotating v0 v1 v2>  [c=<num>]

Numbers are integers or ``p/q`` with an optional sign.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Tuple, Union

from .errors import InvalidReducedPredicate, SceneSyntaxError
from .predicate import GeneralPredicate, ReducedPredicate, reduce
from .rational import RationalVec3

_NUMBER = re.compile(r"[+-]?\d+(?:/\d+)?\Z")


@dataclass(frozen=True)
class Triangle:
    v0: RationalVec3
    v1: RationalVec3
    v2: RationalVec3

    def edges(self) -> Tuple[Tuple[RationalVec3, RationalVec3], ...]:
        return ((self.v0, self.v1), (self.v1, self.v2), (self.v2, self.v0))


@dataclass(frozen=True)
class TrianglePair:
    stationary: Triangle
    rotating: Triangle
    c: Fraction = Fraction(0)


Entry = Union[GeneralPredicate, ReducedPredicate, TrianglePair]


@dataclass(frozen=True)
class SceneDocument:
    entries: Tuple[Entry, ...]

    def predicates(self) -> List[ReducedPredicate]:
        """All predicates in file order, triangle pairs expanded and reduced."""
        out: List[ReducedPredicate] = []
        for e in self.entries:
            if isinstance(e, ReducedPredicate):
                out.append(e)
            elif isinstance(e, GeneralPredicate):
                out.append(reduce(e))
            else:
                out.extend(reduce(g) for g in expand_triangle_pair(e.stationary, e.rotating, e.c))
        return out


def expand_triangle_pair(stationary: Triangle, rotating: Triangle, c=0) -> List[GeneralPredicate]:
    """The 9 edge-edge predicates, stationary edge major."""
    return [
        GeneralPredicate(K, L, A, B, c)
        for K, L in stationary.edges()
        for A, B in rotating.edges()
    ]


def _tokens(line: str) -> Iterator[Tuple[int, str]]:
    for m in re.finditer(r"\S+", line):
        yield m.start() + 1, m.group()


def _number(lineno: int, col: int, tok: str) -> Fraction:
    if not _NUMBER.match(tok):
        raise SceneSyntaxError(lineno, col, f"invalid number {tok!r}")
    value = tok.split("/")
    if len(value) == 2 and int(value[1]) == 0:
        raise SceneSyntaxError(lineno, col, "zero denominator")
    return Fraction(tok)


def _vecs(nums: List[Fraction], n: int) -> List[RationalVec3]:
    return [RationalVec3(*nums[3 * i : 3 * i + 3]) for i in range(n)]


def parse_scene(text: str) -> SceneDocument:
    entries: List[Entry] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = list(_tokens(line))
        if not toks:
            continue
        (kcol, keyword), rest = toks[0], toks[1:]
        if keyword not in ("predicate", "pquv", "tripair"):
            raise SceneSyntaxError(lineno, kcol, f"unknown record type {keyword!r}")

        c_override = None
        if keyword == "tripair" and rest and rest[-1][1].startswith("c="):
            col, tok = rest.pop()
            c_override = _number(lineno, col + 2, tok[2:])

        arity = 18 if keyword == "tripair" else 13
        if len(rest) != arity:
            col = rest[-1][0] + len(rest[-1][1]) if rest else kcol + len(keyword)
            raise SceneSyntaxError(
                lineno, col, f"'{keyword}' expects {arity} numbers, got {len(rest)}"
            )
        nums = [_number(lineno, col, tok) for col, tok in rest]

        if keyword == "tripair":
            v = _vecs(nums, 6)
            entries.append(
                TrianglePair(Triangle(*v[:3]), Triangle(*v[3:]), c_override or Fraction(0))
            )
        elif keyword == "predicate":
            entries.append(GeneralPredicate(*_vecs(nums, 4), nums[12]))
        else:
            try:
                entries.append(ReducedPredicate(*_vecs(nums, 4), nums[12]))
            except InvalidReducedPredicate as exc:
                raise SceneSyntaxError(lineno, kcol, str(exc)) from None
    return SceneDocument(tuple(entries))


def _fmt(q: Fraction) -> str:
    return str(q)


def _fmt_vecs(*vs: RationalVec3) -> str:
    return "  ".join(" ".join(_fmt(x) for x in v) for v in vs)


def print_scene(doc: SceneDocument) -> str:
    lines = []
    for e in doc.entries:
        if isinstance(e, GeneralPredicate):
            lines.append(f"predicate {_fmt_vecs(e.K, e.L, e.A, e.B)}  {_fmt(e.c)}")
        elif isinstance(e, ReducedPredicate):
            lines.append(f"pquv {_fmt_vecs(e.P, e.Q, e.U, e.V)}  {_fmt(e.c)}")
        else:
            s, r = e.stationary, e.rotating
            line = f"tripair {_fmt_vecs(s.v0, s.v1, s.v2)}   {_fmt_vecs(r.v0, r.v1, r.v2)}"
            if e.c != 0:
                line += f"  c={_fmt(e.c)}"
            lines.append(line)
    return "\n".join(lines) + ("\n" if lines else "")


def load_scene(path) -> SceneDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_scene(fh.read())
