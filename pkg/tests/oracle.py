"""Independent reference implementations used only by the tests.

Matrices are produced by symbolic differentiation in sympy and ranked with
sympy's exact arithmetic, sharing no code with the package.
"""

from __future__ import annotations

import random

import sympy
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

X, Y = sympy.symbols("X Y")


def interpolation_rows(points_of_diagram, mults, base_points):
    monos = [X**a * Y**b for a, b in points_of_diagram]
    rows = []
    for (px, py), m in zip(base_points, mults):
        for s in range(m):
            for bx in range(s + 1):
                by = s - bx
                row = []
                for mono in monos:
                    expr = mono
                    if bx:
                        expr = sympy.diff(expr, X, bx)
                    if by:
                        expr = sympy.diff(expr, Y, by)
                    row.append(expr.subs({X: px, Y: py}))
                rows.append(row)
    return rows


def sympy_dimension(points_of_diagram, mults, base_points) -> int:
    pts = list(points_of_diagram)
    if not mults:
        return len(pts) - 1
    return len(pts) - exact_rank(interpolation_rows(pts, mults, base_points)) - 1


def exact_rank(rows) -> int:
    if not rows or not rows[0]:
        return 0
    return DomainMatrix.from_Matrix(sympy.Matrix(rows)).convert_to(QQ).rank()


def random_integer_points(r: int, rng: random.Random, bound: int = 10**6):
    return [(rng.randint(1, bound), rng.randint(1, bound)) for _ in range(r)]


def plane_points(d: int):
    return [(x, y) for x in range(d + 1) for y in range(d + 1 - x)]
