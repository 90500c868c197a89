"""Divisor classes on the blow-up of P^2 and (-1)-curve witnesses.

A class ``(d; m_1, ..., m_r)`` stands for ``dH - sum m_i E_i``; the
exceptional curve ``E_i`` is therefore ``(0; ..., -1, ...)``.  The
intersection form is ``d d' - sum m_i m_i'`` and the anticanonical degree
is ``3d - sum m_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .diagram import triangle
from .errors import NotProjectivePlaneSystem


@dataclass(frozen=True)
class DivisorClass:
    d: int
    mults: tuple[int, ...] = ()

    def __init__(self, d: int, mults: Iterable[int] = ()):
        m = list(int(v) for v in mults)
        while m and m[-1] == 0:
            m.pop()
        object.__setattr__(self, "d", int(d))
        object.__setattr__(self, "mults", tuple(m))

    def padded(self, n: int) -> list[int]:
        return list(self.mults) + [0] * (n - len(self.mults))

    def self_intersection(self) -> int:
        return pairing(self, self)

    def anticanonical_degree(self) -> int:
        return 3 * self.d - sum(self.mults)

    def __str__(self) -> str:
        return f"({self.d};{','.join(map(str, self.mults))})"

    def to_json(self) -> list[int]:
        return [self.d, *self.mults]

    @classmethod
    def from_json(cls, obj: Sequence[int]) -> "DivisorClass":
        return cls(obj[0], obj[1:])

    @classmethod
    def exceptional(cls, i: int) -> "DivisorClass":
        return cls(0, [0] * i + [-1])


def pairing(a: DivisorClass, b: DivisorClass) -> int:
    n = max(len(a.mults), len(b.mults))
    return a.d * b.d - sum(x * y for x, y in zip(a.padded(n), b.padded(n)))


def quadratic_move(c: DivisorClass, triple: tuple[int, int, int]) -> DivisorClass:
    """Standard quadratic transformation based at the points ``triple``."""
    i, j, k = triple
    m = c.padded(max(triple) + 1 if c.mults or triple else 0)
    d = c.d
    mi, mj, mk = m[i], m[j], m[k]
    m[i], m[j], m[k] = d - mj - mk, d - mi - mk, d - mi - mj
    return DivisorClass(2 * d - mi - mj - mk, m)


def _top_three(m: Sequence[int]) -> tuple[int, int, int]:
    # stable: equal multiplicities keep their original index order
    order = sorted(range(len(m)), key=lambda i: -m[i])
    return tuple(order[:3])


def cremona_reduce(c: DivisorClass) -> tuple[DivisorClass, list[tuple[int, int, int]]]:
    """Apply quadratic moves at the three largest multiplicities until
    ``m1 + m2 + m3 <= d`` or ``d < 0``.  Returns the end class and the
    index triples used, in order."""
    n = max(len(c.mults), 3)
    log: list[tuple[int, int, int]] = []
    cur = c
    while cur.d >= 0:
        m = cur.padded(n)
        top = _top_three(m)
        if sum(m[i] for i in top) <= cur.d:
            break
        cur = quadratic_move(cur, top)
        log.append(top)
    return cur, log


def _undo(c: DivisorClass, log: Sequence[tuple[int, int, int]]) -> DivisorClass:
    # each move is an involution
    for triple in reversed(log):
        c = quadratic_move(c, triple)
    return c


def _is_exceptional(c: DivisorClass) -> bool:
    return c.d == 0 and sorted(c.mults)[:1] == [-1] and sum(1 for v in c.mults if v) == 1


def is_minus_one_class(c: DivisorClass) -> bool:
    if pairing(c, c) != -1 or c.anticanonical_degree() != 1:
        return False
    end, _ = cremona_reduce(c)
    return _is_exceptional(end)


# Small (-1)-classes in standard position, up to permutation of points.
TEMPLATES: tuple[tuple[int, tuple[int, ...]], ...] = (
    (1, (1, 1)),
    (2, (1, 1, 1, 1, 1)),
    (3, (2, 1, 1, 1, 1, 1, 1)),
    (4, (2, 2, 2, 1, 1, 1, 1, 1)),
    (5, (2, 2, 2, 2, 2, 2, 1, 1)),
    (6, (3, 2, 2, 2, 2, 2, 2, 2)),
)


def _template_witnesses(system_class: DivisorClass):
    """Best placement of each template: heavy template entries on the
    largest multiplicities minimizes the pairing."""
    r = len(system_class.mults)
    order = sorted(range(r), key=lambda i: -system_class.mults[i])
    for d, tmpl in TEMPLATES:
        if len(tmpl) > r:
            continue
        m = [0] * r
        for idx, v in zip(order, tmpl):
            m[idx] = v
        yield DivisorClass(d, m)


def _trace_witnesses(system_class: DivisorClass):
    """(-1)-classes exposed as negative multiplicities along the system's
    own Cremona reduction, pulled back to the original points."""
    n = max(len(system_class.mults), 3)
    cur = system_class
    log: list[tuple[int, int, int]] = []
    while True:
        m = cur.padded(n)
        for i, v in enumerate(m):
            if v < 0:
                yield _undo(DivisorClass.exceptional(i), log)
        if cur.d < 0:
            return
        top = _top_three(m)
        if sum(m[i] for i in top) <= cur.d:
            return
        cur = quadratic_move(cur, top)
        log.append(top)


def system_class(system) -> DivisorClass:
    """``(d; m_1, ..., m_r)`` for a system on a full triangle diagram."""
    n = len(system.diagram)
    d = 0
    while (d + 1) * (d + 2) // 2 < n:
        d += 1
    if (d + 1) * (d + 2) // 2 != n or system.diagram != triangle(d):
        raise NotProjectivePlaneSystem("diagram is not {|a| <= d}")
    return DivisorClass(d, system.mults)


def find_witness(system) -> tuple[DivisorClass, int] | None:
    """First (-1)-class ``C`` with ``L.C <= -2``, or None."""
    lc = system_class(system)
    for cand in (*_template_witnesses(lc), *_trace_witnesses(lc)):
        value = pairing(lc, cand)
        if value <= -2 and is_minus_one_class(cand):
            return cand, value
    return None


def predicted_dimension(c: DivisorClass) -> int:
    """Dimension predicted by the (-1)-curve picture.

    Repeatedly strips fixed (-1)-curves (negative multiplicities become 0)
    and applies quadratic moves until the class is standard; the standard
    class is taken to be non-special.
    """
    n = max(len(c.mults), 3)
    cur = c
    while True:
        if cur.d < 0:
            return -1
        m = [max(v, 0) for v in cur.padded(n)]
        cur = DivisorClass(cur.d, m)
        top = _top_three(m)
        if sum(m[i] for i in top) <= cur.d:
            break
        cur = quadratic_move(cur, top)
    vdim = (cur.d + 1) * (cur.d + 2) // 2 - 1 - sum(v * (v + 1) // 2 for v in cur.mults)
    return max(vdim, -1)
