"""Finite lattice diagrams in N^2 and affine cuts.

A diagram is the monomial support of a plane curve: the point ``(x, y)``
stands for ``X^x Y^y``.  Diagrams are immutable and always iterate in
canonical order (x ascending, then y ascending).

Two text forms are understood::

    2^3,1^0,0^0,3^2          column i has a_i points starting at height u_i
    [(0,3),(0,4),(1,0)]      explicit point list
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Iterator, NamedTuple

from .errors import NegativeCoordinate, ParseError, PointOnCutLine


class Point(NamedTuple):
    x: int
    y: int


@dataclass(frozen=True)
class Diagram:
    points: tuple[Point, ...]
    _set: frozenset = field(init=False, repr=False, compare=False, hash=False)

    def __init__(self, points: Iterable[tuple[int, int]] = ()):
        pts = set()
        for p in points:
            x, y = int(p[0]), int(p[1])
            if x < 0 or y < 0:
                raise NegativeCoordinate((x, y))
            pts.add(Point(x, y))
        object.__setattr__(self, "points", tuple(sorted(pts)))
        object.__setattr__(self, "_set", frozenset(pts))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __contains__(self, p) -> bool:
        return (p[0], p[1]) in self._set

    def __or__(self, other: "Diagram") -> "Diagram":
        return Diagram(self._set | other._set)

    def __str__(self) -> str:
        return format_diagram(self)

    def __repr__(self) -> str:
        return f"Diagram({format_diagram(self)!r})"

    @property
    def cardinality(self) -> int:
        return len(self.points)

    def as_set(self) -> frozenset:
        return self._set

    def columns(self) -> dict[int, list[int]]:
        cols: dict[int, list[int]] = {}
        for x, y in self.points:
            cols.setdefault(x, []).append(y)
        return cols

    def column_spec(self) -> list[tuple[int, int]] | None:
        """The ``(a_i, u_i)`` list if every column is contiguous, else None."""
        if not self.points:
            return []
        cols = self.columns()
        spec = []
        for x in range(max(cols) + 1):
            ys = cols.get(x)
            if not ys:
                spec.append((0, 0))
                continue
            if ys[-1] - ys[0] + 1 != len(ys):
                return None
            spec.append((len(ys), ys[0]))
        return spec

    def degree_sum(self) -> int:
        return sum(x + y for x, y in self.points)


def make_columns(spec: Iterable[tuple[int, int]]) -> Diagram:
    """Union over i of {i-1} x {u_i, ..., u_i + a_i - 1}."""
    pts = []
    for i, (a, u) in enumerate(spec):
        if a < 0 or u < 0:
            raise ValueError(f"column {i}: count and offset must be non-negative, got {a}^{u}")
        pts.extend((i, u + j) for j in range(a))
    return Diagram(pts)


@lru_cache(maxsize=256)
def triangle(d: int) -> Diagram:
    """Exponents of all monomials of degree at most ``d``."""
    if d < 0:
        raise ValueError("degree must be non-negative")
    return Diagram((x, y) for x in range(d + 1) for y in range(d + 1 - x))


def translate(d: Diagram, v: tuple[int, int]) -> Diagram:
    vx, vy = v
    return Diagram((x + vx, y + vy) for x, y in d)


def equivalent(d1: Diagram, d2: Diagram) -> tuple[int, int] | None:
    """Return ``v`` with ``d1 == d2 + v``, or None if no translation works."""
    if len(d1) != len(d2):
        return None
    if not d1:
        return (0, 0)
    a, b = d1.points[0], d2.points[0]
    v = (a.x - b.x, a.y - b.y)
    if all((x + v[0], y + v[1]) in d1 for x, y in d2):
        return v
    return None


@dataclass(frozen=True)
class AffineCut:
    """F(x, y) = r1*x + r2*y + r0 with rational coefficients."""

    r1: Fraction
    r2: Fraction
    r0: Fraction
    _ints: tuple[int, int, int] = field(init=False, repr=False, compare=False, hash=False)

    def __init__(self, r1, r2, r0):
        r1, r2, r0 = Fraction(r1), Fraction(r2), Fraction(r0)
        if r1 == 0 and r2 == 0:
            raise ValueError("cut needs a non-zero linear part")
        object.__setattr__(self, "r1", r1)
        object.__setattr__(self, "r2", r2)
        object.__setattr__(self, "r0", r0)
        den = lcm(r1.denominator, r2.denominator, r0.denominator)
        object.__setattr__(
            self, "_ints", (int(r1 * den), int(r2 * den), int(r0 * den))
        )

    @classmethod
    def x_cut(cls, c: int) -> "AffineCut":
        return cls(1, 0, Fraction(1, 2) - c)

    @classmethod
    def y_cut(cls, c: int) -> "AffineCut":
        return cls(0, 1, Fraction(1, 2) - c)

    @classmethod
    def diagonal_cut(cls, c: int) -> "AffineCut":
        return cls(1, 1, Fraction(1, 2) - c)

    def scaled(self, p) -> int:
        """F(p) times the common denominator; same sign as F(p)."""
        a, b, c = self._ints
        return a * p[0] + b * p[1] + c

    def __call__(self, p) -> Fraction:
        return self.r1 * p[0] + self.r2 * p[1] + self.r0

    def __str__(self) -> str:
        out = ""
        for coef, var in ((self.r1, "x"), (self.r2, "y"), (self.r0, "")):
            if coef == 0:
                continue
            mag = abs(coef)
            body = var if var and mag == 1 else f"{mag}{'*' + var if var else ''}"
            sign = "-" if coef < 0 else "+"
            out = f"{sign}{body}" if not out else f"{out} {sign} {body}"
        out = out.lstrip("+")
        return f"F = {out}"

    def to_strings(self) -> list[str]:
        return [str(self.r1), str(self.r2), str(self.r0)]

    @classmethod
    def from_strings(cls, triple) -> "AffineCut":
        r1, r2, r0 = (Fraction(s) for s in triple)
        return cls(r1, r2, r0)


def split(d: Diagram, f: AffineCut) -> tuple[Diagram, Diagram]:
    """Partition ``d`` into (F < 0, F > 0); any point with F = 0 is an error."""
    neg, pos = [], []
    for p in d:
        s = f.scaled(p)
        if s == 0:
            raise PointOnCutLine(p)
        (neg if s < 0 else pos).append(p)
    return Diagram(neg), Diagram(pos)


# -- text format -----------------------------------------------------------

_COLUMN = re.compile(r"\s*(\d+)\s*\^\s*(\d+)\s*")
_POINT = re.compile(r"\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*")


def parse_diagram(text: str) -> Diagram:
    s = text.strip()
    if not s:
        return Diagram()
    if s.startswith("["):
        return _parse_point_list(text)
    spec = []
    pos = 0
    for chunk in text.split(","):
        m = _COLUMN.fullmatch(chunk)
        if m is None:
            raise ParseError("expected column term a^u", text, pos)
        spec.append((int(m.group(1)), int(m.group(2))))
        pos += len(chunk) + 1
    return make_columns(spec)


def _parse_point_list(text: str) -> Diagram:
    start = text.index("[")
    end = text.rfind("]")
    if end < start:
        raise ParseError("unterminated point list", text, len(text))
    if text[end + 1:].strip():
        raise ParseError("trailing characters", text, end + 1)
    body = text[start + 1:end]
    pts = []
    pos = start + 1
    while body.strip():
        m = _POINT.match(body)
        if m is None:
            raise ParseError("expected (x,y)", text, pos)
        pts.append((int(m.group(1)), int(m.group(2))))
        pos += m.end()
        body = body[m.end():]
        if body.strip():
            if not body.lstrip().startswith(","):
                raise ParseError("expected ','", text, pos)
            skip = body.index(",") + 1
            pos += skip
            body = body[skip:]
    return Diagram(pts)


def format_diagram(d: Diagram) -> str:
    spec = d.column_spec()
    if spec is None or not spec:
        return "[" + ",".join(f"({x},{y})" for x, y in d) + "]"
    return ",".join(f"{a}^{u}" for a, u in spec)
