"""Dimensions of plane-curve linear systems with fat base points."""

from .diagram import AffineCut, Diagram, Point, equivalent, make_columns, split, translate, triangle
from .interp import (
    LinearSystem,
    exact_dimension,
    falling_factorial,
    generic_dimension,
    onemult_check,
    parse_mults,
)

__version__ = "0.1.0"
