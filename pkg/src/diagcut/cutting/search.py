"""Depth-first search for cut certificates.

The default candidate cuts are ``+-(x - c + 1/2)``, ``+-(y - c + 1/2)`` and
``+-(x + y - c + 1/2)``: slope class in that order, then the orientation
putting D2 on the far side (offsets descending), then the one putting D2 on
the near side (offsets ascending).  The ``extended`` family adds three more
slope classes and tries balanced cuts first.  For each cut the base
points sent to D2 range over sub-multisets whose condition count equals
``|D2|``, heaviest multiplicities first.  Children no larger than
``config.rank_threshold`` are closed by a modular-rank leaf.

The search is sound but not complete: ``None`` says nothing about speciality.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from typing import Callable, Iterable, Iterator

import numpy as np

from ..config import RunConfig
from ..diagram import AffineCut, Diagram, split, translate
from ..interp import CERTIFIED, LinearSystem, generic_dimension
from ..linalg import rank_mod_word
from .certificate import MODULAR, CutCertificate, CutNode, EmptyLeaf, EquivLeaf, RankLeaf

CutFamily = Callable[[Diagram], Iterable[AffineCut]]

# Screening modulus, small enough for exact float64 matrix products.  A
# full-rank specialization over any prime proves non-speciality, so
# screening can only lose candidates, never admit bad ones.
SCREEN_PRIME = 4_194_301


def _screen_matrix(system: LinearSystem, rng) -> np.ndarray:
    """Interpolation matrix mod SCREEN_PRIME at random points, built one
    derivative order ``(bx, by)`` at a time for all base points at once."""
    p = SCREEN_PRIME
    cols = np.array(system.diagram.points, dtype=np.int64).reshape(-1, 2)
    ax, ay = cols[:, 0], cols[:, 1]
    top = int(cols.max()) if cols.size else 0
    mults = np.array(system.mults, dtype=np.int64)
    orders = int(mults.max()) if len(mults) else 0
    # ff[a, b] = a (a-1) ... (a-b+1) mod p; zero once b > a
    a = np.arange(top + 1, dtype=np.int64)
    ff = np.zeros((top + 1, max(orders, 1)), dtype=np.int64)
    ff[:, 0] = 1
    for b in range(1, orders):
        ff[:, b] = ff[:, b - 1] * np.maximum(a - b + 1, 0) % p
    pts = rng.integers(1, p, size=(len(mults), 2))
    # powers[j, k] = coordinate_j ** k mod p
    xs = np.ones((len(mults), top + 1), dtype=np.int64)
    ys = np.ones((len(mults), top + 1), dtype=np.int64)
    for k in range(1, top + 1):
        xs[:, k] = xs[:, k - 1] * pts[:, 0] % p
        ys[:, k] = ys[:, k - 1] * pts[:, 1] % p
    blocks = []
    for s in range(orders):
        live = mults > s
        for bx in range(s + 1):
            by = s - bx
            ok = (ax >= bx) & (ay >= by)
            ex = np.where(ok, ax - bx, 0)
            ey = np.where(ok, ay - by, 0)
            coef = np.where(ok, ff[ax, bx] * ff[ay, by] % p, 0)
            blocks.append(xs[live][:, ex] * ys[live][:, ey] % p * coef % p)
    if not blocks:
        return np.zeros((0, len(ax)), dtype=np.int64)
    return np.vstack(blocks)


def screen_nonspecial(system: LinearSystem, seed: int = 0, trials: int = 1) -> bool:
    """Fast one-sided test: True proves ``system`` non-special."""
    n = len(system.diagram)
    if not system.mults or n == 0:
        return True
    target = n - 1 - system.edim
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        if rank_mod_word(_screen_matrix(system, rng), SCREEN_PRIME) == target:
            return True
    return False


def _flip(cut: AffineCut) -> AffineCut:
    return AffineCut(-cut.r1, -cut.r2, -cut.r0)


def standard_cuts(d: Diagram) -> Iterator[AffineCut]:
    xs = [p.x for p in d]
    ys = [p.y for p in d]
    ss = [p.x + p.y for p in d]
    for make, vals in ((AffineCut.x_cut, xs), (AffineCut.y_cut, ys), (AffineCut.diagonal_cut, ss)):
        lo, hi = min(vals), max(vals)
        for c in range(hi, lo, -1):
            yield make(c)
        for c in range(lo + 1, hi + 1):
            yield _flip(make(c))


def extended_cuts(d: Diagram) -> list[AffineCut]:
    """Paper cuts plus slopes 2:1, 1:2 and 1:-1, both orientations.

    With this many candidates, order matters: cuts splitting ``d`` most
    evenly come first (stable, so ties keep the generation order).
    """
    cuts = list(standard_cuts(d))
    half = Fraction(1, 2)
    for a, b in ((2, 1), (1, 2), (1, -1), (-2, -1), (-1, -2), (-1, 1)):
        vals = [a * p.x + b * p.y for p in d]
        for c in range(max(vals), min(vals), -1):
            cuts.append(AffineCut(a, b, half - c))
    if not cuts:
        return cuts
    pts = np.array(d.points, dtype=np.int64)
    coef = np.array([cut._ints for cut in cuts], dtype=np.int64)
    upper = (coef[:, :1] * pts[:, 0] + coef[:, 1:2] * pts[:, 1] + coef[:, 2:] > 0).sum(axis=1)
    order = np.argsort(np.abs(len(d) - 2 * upper), kind="stable")
    return [cuts[i] for i in order]


CUT_FAMILIES: dict[str, CutFamily] = {"standard": standard_cuts, "extended": extended_cuts}


def _splits(mults: tuple[int, ...], size: int) -> Iterator[tuple[int, ...]]:
    """Index sets of sub-multisets imposing exactly ``size`` conditions."""
    counts = Counter(mults)
    values = sorted(counts, reverse=True)

    def rec(i, remaining):
        if remaining == 0:
            yield ()
            return
        if i == len(values):
            return
        v = values[i]
        c = v * (v + 1) // 2
        for take in range(min(counts[v], remaining // c), -1, -1):
            for rest in rec(i + 1, remaining - take * c):
                yield ((v, take),) + rest

    for choice in rec(0, size):
        want = dict(choice)
        picked = []
        for idx, m in enumerate(mults):
            if want.get(m, 0):
                picked.append(idx)
                want[m] -= 1
        yield tuple(picked)


class _Searcher:
    def __init__(self, config: RunConfig, family: CutFamily):
        self.config = config
        self.family = family
        self.found: dict = {}
        self.failed: dict = {}
        self.screen_cache: dict = {}
        self.rank_cache: dict = {}

    def screened(self, system: LinearSystem) -> bool:
        key = (system.diagram, tuple(sorted(system.mults)))
        if key not in self.screen_cache:
            self.screen_cache[key] = screen_nonspecial(system, self.config.seed)
        return self.screen_cache[key]

    def certified(self, system: LinearSystem) -> bool:
        """The check a modular ``RankLeaf`` will face in ``verify``."""
        key = (system.diagram, tuple(sorted(system.mults)))
        if key not in self.rank_cache:
            ok = self.screened(system)
            if ok:
                res = generic_dimension(system, self.config.trials, self.config.seed, self.config.prime)
                ok = res.certainty == CERTIFIED
            self.rank_cache[key] = ok
        return self.rank_cache[key]

    def solve(self, system: LinearSystem, depth: int) -> CutCertificate | None:
        if not system.mults:
            return EmptyLeaf(system)
        d = system.diagram
        if len(d) == 0 or len(d) <= self.config.rank_threshold:
            if self.certified(system):
                return RankLeaf(system, MODULAR, self.config.seed, self.config.trials)
            return None
        # work on the translate touching both axes
        v = (-min(p.x for p in d), -min(p.y for p in d))
        if v != (0, 0):
            moved = LinearSystem(translate(d, v), system.mults)
            inner = self.solve(moved, depth)
            return None if inner is None else EquivLeaf(system, v, inner)
        key = (d, tuple(sorted(system.mults)))
        if key in self.found:
            return self.found[key]
        if self.failed.get(key, -1) >= depth or depth <= 0:
            return None
        cert = self._try_cuts(system, depth)
        if cert is None:
            self.failed[key] = depth
        else:
            self.found[key] = cert
        return cert

    def _try_cuts(self, system: LinearSystem, depth: int) -> CutCertificate | None:
        d = system.diagram
        pts = np.array(d.points, dtype=np.int64)
        reachable = _subset_sums(system.mults)
        seen = set()
        for cut in self.family(d):
            a, b, c = cut._ints
            upper = pts[:, 0] * a + pts[:, 1] * b + c > 0
            n2 = int(upper.sum())
            if not 0 < n2 < len(d) or n2 not in reachable:
                continue
            key = upper.tobytes()
            if key in seen:
                continue
            seen.add(key)
            d1, d2 = split(d, cut)
            for idx in _splits(system.mults, n2):
                chosen = set(idx)
                l2 = LinearSystem(d2, tuple(system.mults[i] for i in idx))
                l1 = LinearSystem(d1, tuple(m for i, m in enumerate(system.mults) if i not in chosen))
                # a special L1 or L2 can never be certified; skip early
                if len(d2) > self.config.rank_threshold and not self.screened(l2):
                    continue
                if len(d1) > self.config.rank_threshold and l1.mults and not self.screened(l1):
                    continue
                sub2 = self.solve(l2, depth - 1)
                if sub2 is None:
                    continue
                sub1 = self.solve(l1, depth - 1)
                if sub1 is None:
                    continue
                return CutNode(system, cut, idx, sub2, sub1)
        return None


def _subset_sums(mults: tuple[int, ...]) -> set[int]:
    sums = {0}
    for m in mults:
        c = m * (m + 1) // 2
        sums |= {s + c for s in sums}
    return sums


def search_cut_proof(
    system: LinearSystem,
    max_depth: int | None = None,
    cut_family: str | CutFamily = "standard",
    config: RunConfig | None = None,
) -> CutCertificate | None:
    """First certificate found with at most ``max_depth`` nested cuts."""
    config = config or RunConfig()
    depth = config.depth if max_depth is None else max_depth
    family = CUT_FAMILIES[cut_family] if isinstance(cut_family, str) else cut_family
    return _Searcher(config, family).solve(system, depth)
