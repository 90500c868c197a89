"""Interpolation matrices and dimensions of fat-point linear systems.

``L_D(m_1, ..., m_r)`` is the space of polynomials supported on the diagram
``D`` vanishing to order ``m_j`` at ``r`` general points.  Its dimension is
``|D| - rank M(L) - 1`` where row ``(j, beta)`` of ``M(L)`` is the
``beta``-th partial derivative evaluated at the ``j``-th point.

Two rank routes are provided:

* :func:`generic_dimension` evaluates at random points of F_p.  Specializing
  points can only lower the rank, so every trial gives an upper bound on the
  generic dimension.  Reaching ``edim`` therefore proves non-speciality;
  anything above is only probable speciality.
* :func:`exact_dimension` evaluates at given rational points and uses
  fraction-free elimination.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .diagram import Diagram, Point, format_diagram, parse_diagram, triangle
from .errors import CapExceeded, CardinalityMismatch, ParseError, PrimeTooSmall, ZeroCoordinate
from .linalg import MERSENNE61, rank_fraction_free, rank_mod_p

DEFAULT_PRIME = MERSENNE61
MIN_PRIME = 1 << 40
EXACT_CAP = 300

CERTIFIED = "CertifiedNonSpecial"
PROBABLY_SPECIAL = "ProbablySpecial"
EXACT = "ExactRational"


# -- multiplicities --------------------------------------------------------

_MULT_TERM = re.compile(r"\s*(\d+)\s*(?:[xX]\s*(\d+))?\s*")


def parse_mults(text: str) -> tuple[int, ...]:
    """Parse ``7x6,6x4,1`` into ``(7,7,7,7,7,7,6,6,6,6,1)``."""
    if not text.strip():
        return ()
    out: list[int] = []
    pos = 0
    for term in text.split(","):
        m = _MULT_TERM.fullmatch(term)
        if m is None:
            raise ParseError("expected m or mxk", text, pos)
        mult = int(m.group(1))
        if mult < 1:
            raise ParseError("multiplicities must be positive", text, pos)
        out.extend([mult] * (int(m.group(2)) if m.group(2) else 1))
        pos += len(term) + 1
    return tuple(out)


def format_mults(mults: Sequence[int]) -> str:
    """Inverse of :func:`parse_mults`, compressing consecutive runs."""
    parts = []
    i = 0
    while i < len(mults):
        j = i
        while j < len(mults) and mults[j] == mults[i]:
            j += 1
        parts.append(str(mults[i]) if j - i == 1 else f"{mults[i]}x{j - i}")
        i = j
    return ",".join(parts)


def conditions(mults: Iterable[int]) -> int:
    return sum(m * (m + 1) // 2 for m in mults)


@dataclass(frozen=True)
class LinearSystem:
    diagram: Diagram
    mults: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "mults", tuple(int(m) for m in self.mults))
        if any(m < 1 for m in self.mults):
            raise ValueError("multiplicities must be positive")

    @classmethod
    def plane(cls, d: int, mults: Sequence[int]) -> "LinearSystem":
        return cls(triangle(d), tuple(mults))

    @property
    def conditions(self) -> int:
        return conditions(self.mults)

    @property
    def vdim(self) -> int:
        return len(self.diagram) - 1 - self.conditions

    @property
    def edim(self) -> int:
        return max(self.vdim, -1)

    def same_system(self, other: "LinearSystem") -> bool:
        """Equal up to the order of the base points."""
        return self.diagram == other.diagram and sorted(self.mults) == sorted(other.mults)

    def plane_degree(self) -> int | None:
        """``d`` if the diagram is the full triangle of degree ``d``."""
        n = len(self.diagram)
        d = 0
        while (d + 1) * (d + 2) // 2 < n:
            d += 1
        if n and (d + 1) * (d + 2) // 2 == n and self.diagram == triangle(d):
            return d
        return None

    def describe(self) -> str:
        d = self.plane_degree()
        where = str(d) if d is not None else f"[{format_diagram(self.diagram)}]"
        return f"L_{where}({format_mults(self.mults)})"

    def to_json(self) -> dict:
        return {"diagram": format_diagram(self.diagram), "mults": format_mults(self.mults)}

    @classmethod
    def from_json(cls, obj: dict) -> "LinearSystem":
        return cls(parse_diagram(obj["diagram"]), parse_mults(obj["mults"]))


def vdim(system: LinearSystem) -> int:
    return system.vdim


def edim(system: LinearSystem) -> int:
    return system.edim


# -- matrices --------------------------------------------------------------

class ConditionIndex(NamedTuple):
    point_index: int      # 0-based here
    derivative: Point


def condition_indices(mults: Sequence[int]) -> list[ConditionIndex]:
    return [
        ConditionIndex(j, Point(bx, s - bx))
        for j, m in enumerate(mults)
        for s in range(m)
        for bx in range(s + 1)
    ]


def falling_factorial(a: int, b: int) -> int:
    out = 1
    for k in range(b):
        out *= a - k
    return out


def entry_monomial(row: ConditionIndex, col: tuple[int, int]) -> tuple[int, int, int] | None:
    """Coefficient and exponents of ``M(L)[row, col]`` in the point variables.

    Returns ``(c, ex, ey)`` meaning ``c * P_X^ex * P_Y^ey`` for the row's point,
    or None when the derivative kills the monomial.
    """
    bx, by = row.derivative
    ax, ay = col
    if ax < bx or ay < by:
        return None
    return falling_factorial(ax, bx) * falling_factorial(ay, by), ax - bx, ay - by


@dataclass(frozen=True)
class PrimeField:
    p: int = DEFAULT_PRIME


@dataclass(frozen=True)
class Rationals:
    pass


QQ = Rationals()


@dataclass
class InterpolationMatrix:
    rows: list[ConditionIndex]
    cols: list[Point]
    entries: list[list]
    points: list[tuple]
    field: PrimeField | Rationals

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def rank(self) -> int:
        if not self.rows or not self.cols:
            return 0
        if isinstance(self.field, PrimeField):
            return rank_mod_p(self.entries, self.field.p)
        return rank_fraction_free(self.entries)


def check_prime(p: int, diagram: Diagram | None = None) -> None:
    if p <= MIN_PRIME:
        raise PrimeTooSmall(f"modulus {p} must exceed 2^40")
    # Coefficients are products of integers below the largest exponent; a
    # prime above that exponent never divides them.
    if diagram is not None and diagram.points:
        top = max(max(x, y) for x, y in diagram)
        if top >= p:
            raise PrimeTooSmall(f"modulus {p} divides a falling-factorial coefficient")


def build_matrix(system: LinearSystem, points: Sequence[tuple], field: PrimeField | Rationals = QQ) -> InterpolationMatrix:
    mults = system.mults
    if len(points) != len(mults):
        raise ValueError(f"need {len(mults)} points, got {len(points)}")
    cols = list(system.diagram)
    rows = condition_indices(mults)
    if isinstance(field, PrimeField):
        p = field.p
        check_prime(p, system.diagram)
        pts = [(int(px) % p, int(py) % p) for px, py in points]
        if any(px == 0 or py == 0 for px, py in pts):
            raise ZeroCoordinate("point coordinates must be non-zero in F_p")
        entries = _entries_mod_p(rows, cols, pts, p)
    else:
        pts = [(Fraction(px), Fraction(py)) for px, py in points]
        if any(px == 0 or py == 0 for px, py in pts):
            raise ZeroCoordinate("point coordinates must be non-zero")
        entries = _entries_exact(rows, cols, pts)
    return InterpolationMatrix(rows, cols, entries, pts, field)


def _power_table(v, n: int, p: int | None):
    out = [1] * (n + 1)
    for k in range(1, n + 1):
        out[k] = out[k - 1] * v if p is None else out[k - 1] * v % p
    return out


def _entries_mod_p(rows, cols, pts, p):
    top = max((max(x, y) for x, y in cols), default=0)
    ff = [[falling_factorial(a, b) % p for b in range(top + 1)] for a in range(top + 1)]
    powers = {}
    entries = []
    for row in rows:
        j = row.point_index
        if j not in powers:
            px, py = pts[j]
            powers[j] = (_power_table(px, top, p), _power_table(py, top, p))
        xs, ys = powers[j]
        bx, by = row.derivative
        line = []
        for ax, ay in cols:
            if ax < bx or ay < by:
                line.append(0)
            else:
                line.append(ff[ax][bx] * ff[ay][by] % p * xs[ax - bx] % p * ys[ay - by] % p)
        entries.append(line)
    return entries


def _entries_exact(rows, cols, pts):
    top = max((max(x, y) for x, y in cols), default=0)
    entries = []
    for row in rows:
        px, py = pts[row.point_index]
        xs, ys = _power_table(px, top, None), _power_table(py, top, None)
        line = []
        for col in cols:
            e = entry_monomial(row, col)
            line.append(Fraction(0) if e is None else e[0] * xs[e[1]] * ys[e[2]])
        entries.append(line)
    return entries


# -- dimensions ------------------------------------------------------------

@dataclass(frozen=True)
class DimensionResult:
    system: LinearSystem
    value: int
    certainty: str
    modulus: int | None = None
    seed: int | None = None
    ranks: tuple[int, ...] = ()
    error_bound: float | None = None

    @property
    def vdim(self) -> int:
        return self.system.vdim

    @property
    def edim(self) -> int:
        return self.system.edim

    @property
    def special(self) -> bool:
        return self.value > self.edim

    def to_json(self) -> dict:
        return {
            "system": self.system.to_json(),
            "value": self.value,
            "certainty": self.certainty,
            "modulus": self.modulus,
            "seed": self.seed,
            "ranks": list(self.ranks),
            "error_bound": self.error_bound,
            "vdim": self.vdim,
            "edim": self.edim,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DimensionResult":
        return cls(
            LinearSystem.from_json(obj["system"]),
            int(obj["value"]),
            obj["certainty"],
            obj.get("modulus"),
            obj.get("seed"),
            tuple(obj.get("ranks", ())),
            obj.get("error_bound"),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def trial_points(r: int, seed: int, trial: int, p: int) -> list[tuple[int, int]]:
    """Uniform points in (F_p^*)^2, one independent stream per trial."""
    child = np.random.SeedSequence(seed).spawn(trial + 1)[trial]
    rng = np.random.default_rng(child)
    coords = rng.integers(1, p, size=(r, 2), dtype=np.uint64, endpoint=False)
    return [(int(a), int(b)) for a, b in coords]


def generic_dimension(system: LinearSystem, trials: int = 3, seed: int = 0, p: int = DEFAULT_PRIME) -> DimensionResult:
    """Minimum of ``|D| - rank - 1`` over random specializations in F_p.

    Stops early once the value reaches ``edim``, which no trial can go below.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    check_prime(p, system.diagram)
    n = len(system.diagram)
    target = system.edim
    ranks = []
    if not system.mults or n == 0:
        # no conditions, or nothing to condition: dim = |D| - 1 = edim
        return DimensionResult(system, n - 1, CERTIFIED, p, seed, (0,))
    for t in range(trials):
        pts = trial_points(len(system.mults), seed, t, p)
        ranks.append(build_matrix(system, pts, PrimeField(p)).rank())
        if n - max(ranks) - 1 == target:
            break
    value = n - max(ranks) - 1
    if value == target:
        return DimensionResult(system, value, CERTIFIED, p, seed, tuple(ranks))
    bound = (system.diagram.degree_sum() / p) ** len(ranks)
    return DimensionResult(system, value, PROBABLY_SPECIAL, p, seed, tuple(ranks), bound)


def random_rational_points(r: int, rng, num_bits: int = 20, den_bits: int = 8) -> list[tuple[Fraction, Fraction]]:
    """Non-zero rationals with bounded numerators and denominators."""
    def one():
        num = 0
        while num == 0:
            num = rng.randrange(-(1 << num_bits), 1 << num_bits)
        return Fraction(num, rng.randrange(1, 1 << den_bits))
    return [(one(), one()) for _ in range(r)]


def exact_dimension(system: LinearSystem, points: Sequence[tuple], cap: int = EXACT_CAP) -> DimensionResult:
    n = len(system.diagram)
    if n > cap:
        raise CapExceeded(f"|D| = {n} exceeds the exact-arithmetic cap {cap}")
    if not system.mults:
        return DimensionResult(system, n - 1, EXACT)
    rank = build_matrix(system, points, QQ).rank()
    return DimensionResult(system, n - rank - 1, EXACT, None, None, (rank,))


def onemult_check(d: Diagram, m: int) -> bool:
    """True iff the points of ``d`` lie on no curve of degree ``m - 1``.

    For ``|d| = m(m+1)/2`` this is equivalent to ``L_d(m)`` being non-special.
    """
    need = m * (m + 1) // 2
    if len(d) != need:
        raise CardinalityMismatch(f"|D| = {len(d)} but m(m+1)/2 = {need}")
    # 0**0 == 1 in Python, which is the convention wanted for the beta = 0 row
    rows = [[x ** bx * y ** (s - bx) for x, y in d] for s in range(m) for bx in range(s + 1)]
    return rank_fraction_free(rows) == need
