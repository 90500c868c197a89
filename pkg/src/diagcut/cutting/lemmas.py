"""Constructive certificates for the layer lemmas.

All diagrams here are column diagrams ``(a_1^u_1, ..., a_n^u_n)`` and all
systems are homogeneous ``m^xn``.  Each constructor returns a certificate
whose root system is the lemma's system; sub-lemmas appear either fully
expanded or, with ``lazy=True``, as ``LemmaLeaf`` references.
"""

from __future__ import annotations

from typing import Mapping

from ..config import RunConfig
from ..diagram import AffineCut, Diagram, equivalent, make_columns, triangle
from ..errors import BaseMissing, DivisibilityViolation, MissingEoLSCertificate
from ..interp import LinearSystem
from .certificate import (
    MODULAR,
    ONEMULT,
    CutCertificate,
    CutNode,
    EmptyLeaf,
    EquivLeaf,
    LemmaLeaf,
    RankLeaf,
    cut_children,
)

# -- diagrams --------------------------------------------------------------


def backtriangle_diagram(m: int) -> Diagram:
    """(1^(m-1), 2^(m-2), ..., m^0)"""
    return make_columns([(i + 1, m - 1 - i) for i in range(m)])


def twotriangles_diagram(m: int) -> Diagram:
    """(m^m, m^(m-1), ..., m^0)"""
    return make_columns([(m, m - i) for i in range(m + 1)])


def layer_diagram(k: int, h: int) -> Diagram:
    """(h^(k-1), h^(k-2), ..., h^0): k columns of height h on a staircase."""
    return make_columns([(h, k - 1 - i) for i in range(k)])


def eols_diagram(m: int, k: int) -> Diagram:
    """(h^(k-1), ..., h^0, (h-1)^0, ..., 1^0) with h = m(m+1)."""
    h = m * (m + 1)
    return make_columns([(h, k - 1 - i) for i in range(k)] + [(h - 1 - j, 0) for j in range(h - 1)])


def eols(m: int) -> list[LinearSystem]:
    """The end-of-layer systems for multiplicity ``m``, k = 1..m+1."""
    if m < 1:
        raise ValueError("m must be positive")
    h = m * (m + 1)
    return [LinearSystem(eols_diagram(m, k), (m,) * (2 * k + h - 1)) for k in range(1, m + 2)]


# -- helpers ---------------------------------------------------------------


def _transport(system: LinearSystem, inner: CutCertificate) -> CutCertificate:
    """Wrap ``inner`` so that it certifies ``system`` (same up to translation)."""
    v = equivalent(inner.system.diagram, system.diagram)
    if v is None or sorted(system.mults) != sorted(inner.system.mults):
        raise ValueError(f"{system.describe()} is not a translate of {inner.system.describe()}")
    if v == (0, 0):
        return inner
    return EquivLeaf(system, v, inner)


def _cut(system: LinearSystem, cut: AffineCut, n2: int, prove2, prove1) -> CutNode:
    """Cut node sending the last ``n2`` base points to D2."""
    n = len(system.mults)
    split = tuple(range(n - n2, n))
    l1, l2 = cut_children(system, cut, split)
    return CutNode(system, cut, split, _transport(l2, prove2), _transport(l1, prove1))


def _sub(name: str, params: tuple[int, ...], system: LinearSystem, config, lazy: bool):
    if lazy:
        return LemmaLeaf(system, name, params)
    return _build(name, params, config, lazy=False)


def _rank_leaf(system: LinearSystem, config: RunConfig) -> RankLeaf:
    return RankLeaf(system, MODULAR, config.seed, config.trials)


# -- lemmas ----------------------------------------------------------------


def lemma_backtriangle(m: int, config: RunConfig | None = None) -> CutCertificate:
    if m < 1:
        raise ValueError("m must be positive")
    return RankLeaf(LinearSystem(backtriangle_diagram(m), (m,)), ONEMULT)


def lemma_twotriangles(m: int, config: RunConfig | None = None, lazy: bool = False) -> CutCertificate:
    if m < 1:
        raise ValueError("m must be positive")
    config = config or RunConfig()
    system = LinearSystem(twotriangles_diagram(m), (m, m))
    # upper part is the reversed staircase, i.e. triangle(m-1) after a shift
    upper = RankLeaf(LinearSystem(triangle(m - 1), (m,)), ONEMULT)
    lower = _sub("backtriangle", (m,), LinearSystem(backtriangle_diagram(m), (m,)), config, lazy)
    return _cut(system, AffineCut.y_cut(m), 1, upper, lower)


def lemma_singlelayer(m: int, k: int, config: RunConfig | None = None, lazy: bool = False) -> CutCertificate:
    if m < 1 or k < 1 or k % (m + 1):
        raise DivisibilityViolation(f"singlelayer needs (m+1) | k, got m={m}, k={k}")
    config = config or RunConfig()
    if k == m + 1:
        return lemma_twotriangles(m, config, lazy)
    n = 2 * k // (m + 1)
    system = LinearSystem(layer_diagram(k, m), (m,) * n)
    rest = k - (m + 1)
    right = _sub("singlelayer", (m, rest), LinearSystem(layer_diagram(rest, m), (m,) * (n - 2)), config, lazy)
    left = _sub("twotriangles", (m,), LinearSystem(twotriangles_diagram(m), (m, m)), config, lazy)
    return _cut(system, AffineCut.x_cut(m + 1), n - 2, right, left)


def lemma_fatlayer(m: int, k: int, h: int, config: RunConfig | None = None, lazy: bool = False) -> CutCertificate:
    if m < 1 or k < 1 or h < 1 or k % (m + 1) or h % m:
        raise DivisibilityViolation(f"fatlayer needs (m+1) | k and m | h, got m={m}, k={k}, h={h}")
    config = config or RunConfig()
    if h == m:
        return lemma_singlelayer(m, k, config, lazy)
    q = m * (m + 1)
    n = 2 * k * h // q
    n_top = 2 * k * (h - m) // q
    system = LinearSystem(layer_diagram(k, h), (m,) * n)
    top = _sub("fatlayer", (m, k, h - m), LinearSystem(layer_diagram(k, h - m), (m,) * n_top), config, lazy)
    bottom = _sub("singlelayer", (m, k), LinearSystem(layer_diagram(k, m), (m,) * (n - n_top)), config, lazy)
    return _cut(system, AffineCut.diagonal_cut(k - 1 + m), n_top, top, bottom)


def eols_certificates(m: int, config: RunConfig | None = None) -> dict[int, CutCertificate]:
    """Modular-rank leaves for every end-of-layer system, keyed by k."""
    config = config or RunConfig()
    return {k: _rank_leaf(s, config) for k, s in enumerate(eols(m), start=1)}


def lemma_fulllayer(
    m: int,
    k: int,
    eols_certs: Mapping[int, CutCertificate],
    config: RunConfig | None = None,
    lazy: bool = False,
) -> CutCertificate:
    if m < 1 or k < 1:
        raise ValueError("m and k must be positive")
    config = config or RunConfig()
    h = m * (m + 1)
    k1, k2 = divmod(k - 1, m + 1)
    k2 += 1
    if k2 not in eols_certs:
        raise MissingEoLSCertificate(f"EoLS({m}) member k={k2}")
    end = eols_certs[k2]
    system = LinearSystem(eols_diagram(m, k), (m,) * (2 * k + h - 1))
    if k1 == 0:
        return _transport(system, end)
    width = k1 * (m + 1)
    slab = _sub("fatlayer", (m, width, h), LinearSystem(layer_diagram(width, h), (m,) * (2 * width)), config, lazy)
    return _cut(system, AffineCut.x_cut(width), 2 * k2 + h - 1, end, slab)


def extend_by_layer(
    base: CutCertificate,
    m: int,
    eols_certs: Mapping[int, CutCertificate],
    config: RunConfig | None = None,
    lazy: bool = False,
) -> CutCertificate:
    """From a certificate for ``L_d(m_1..m_r)`` build one for
    ``L_{d+h}(m_1..m_r, m^x(2d+h+3))`` with ``h = m(m+1)``."""
    config = config or RunConfig()
    h = m * (m + 1)
    n = len(base.system.diagram)
    d = 0
    while (d + 1) * (d + 2) // 2 < n:
        d += 1
    if base.system.diagram != triangle(d):
        raise ValueError("base system must live on a full triangle")
    extra = 2 * d + h + 3
    system = LinearSystem(triangle(d + h), base.system.mults + (m,) * extra)
    # the band d < x + y <= d + h is exactly the fulllayer diagram for k = d + 2
    band = lemma_fulllayer(m, d + 2, eols_certs, config, lazy)
    return _cut(system, AffineCut.diagonal_cut(d + 1), extra, band, base)


def theorem_finitely_step(
    m: int,
    d: int,
    p: int,
    d_low: int,
    base: Mapping[tuple[int, int], CutCertificate],
    eols_certs: Mapping[int, CutCertificate],
    config: RunConfig | None = None,
    lazy: bool = False,
) -> CutCertificate:
    """Certificate for ``L_d(m^xp)`` from the table entry ``(d - h, p - (2d - h + 3))``."""
    h = m * (m + 1)
    if d <= d_low + h:
        raise BaseMissing(f"d = {d} is inside the base window [{d_low}, {d_low + h}]")
    layer = 2 * d - h + 3
    if p < layer:
        raise ValueError(f"the layer cut needs p >= {layer}; fewer points follow by restriction")
    key = (d - h, p - layer)
    if key not in base:
        raise BaseMissing(f"no base certificate for L_{key[0]}(m^x{key[1]})")
    return extend_by_layer(base[key], m, eols_certs, config, lazy)


def base_leaf(system: LinearSystem, config: RunConfig | None = None) -> CutCertificate:
    config = config or RunConfig()
    return EmptyLeaf(system) if not system.mults else _rank_leaf(system, config)


def _build(name: str, params, config: RunConfig, lazy: bool) -> CutCertificate:
    params = tuple(params)
    if name == "backtriangle":
        return lemma_backtriangle(*params, config=config)
    if name == "twotriangles":
        return lemma_twotriangles(*params, config=config, lazy=lazy)
    if name == "singlelayer":
        return lemma_singlelayer(*params, config=config, lazy=lazy)
    if name == "fatlayer":
        return lemma_fatlayer(*params, config=config, lazy=lazy)
    if name == "fulllayer":
        m, k = params
        return lemma_fulllayer(m, k, eols_certificates(m, config), config, lazy=lazy)
    raise ValueError(f"unknown lemma {name!r}")


def expand_lemma(name: str, params, config: RunConfig | None = None) -> CutCertificate:
    """Constructive tree for a ``LemmaLeaf``, one level deep (sub-lemmas stay lazy)."""
    return _build(name, params, config or RunConfig(), lazy=True)
