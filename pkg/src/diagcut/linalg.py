"""Rank of dense matrices over F_p and over Q.

The default modulus is the Mersenne prime 2^61 - 1.  Products of two
residues need 122 bits, so multiplication is done on uint64 halves with
the Mersenne folding ``2^61 = 1 (mod p)``.  Any other prime falls back to
numpy object arrays of Python ints (correct, roughly 10x slower).
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

MERSENNE61 = (1 << 61) - 1

_M61 = np.uint64(MERSENNE61)
_MASK31 = np.uint64((1 << 31) - 1)
_MASK30 = np.uint64((1 << 30) - 1)
_S31 = np.uint64(31)
_S30 = np.uint64(30)
_S61 = np.uint64(61)


def _fold(x):
    # x < 2^64 -> x mod p, assuming the result of one fold is < 2p
    x = (x & _M61) + (x >> _S61)
    return np.where(x >= _M61, x - _M61, x)


def mulmod61(a, b):
    """Elementwise a*b mod 2^61-1 for uint64 arrays with entries < p."""
    ah, al = a >> _S31, a & _MASK31
    bh, bl = b >> _S31, b & _MASK31
    hh = ah * bh                     # < 2^60, weight 2^62 = 2
    mid = ah * bl + al * bh          # < 2^62, weight 2^31
    ll = al * bl                     # < 2^62
    mid_h, mid_l = mid >> _S30, mid & _MASK30
    # mid*2^31 = mid_h*2^61 + mid_l*2^31 = mid_h + mid_l*2^31 (mod p)
    acc = _fold((hh << np.uint64(1)) + mid_h + (mid_l << _S31))
    return _fold(acc + ll)


def _rank_m61(a: np.ndarray) -> int:
    a = a.copy()
    nrows, ncols = a.shape
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        nz = np.flatnonzero(a[rank:, col])
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, col]), MERSENNE61 - 2, MERSENNE61)
        prow = mulmod61(a[rank, col:], np.uint64(inv))
        a[rank, col:] = prow
        below = rank + 1 + np.flatnonzero(a[rank + 1:, col])
        if below.size:
            factors = a[below, col][:, None]
            sub = mulmod61(factors, prow[None, :])
            block = a[below, col:]
            a[below, col:] = np.where(block >= sub, block - sub, block + (_M61 - sub))
        rank += 1
    return rank


def _rank_generic(a: np.ndarray, p: int) -> int:
    a = a.astype(object)
    nrows, ncols = a.shape
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        piv = next((i for i in range(rank, nrows) if a[i, col] % p), None)
        if piv is None:
            continue
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, col]), p - 2, p)
        a[rank, col:] = (a[rank, col:] * inv) % p
        if rank + 1 < nrows:
            factors = a[rank + 1:, col][:, None]
            a[rank + 1:, col:] = (a[rank + 1:, col:] - factors * a[rank, col:][None, :]) % p
        rank += 1
    return rank


def rank_mod_small(a: np.ndarray, p: int) -> int:
    """Rank over F_p for a prime p < 2^31, on an int64 array of residues.

    Products of two residues fit in 62 bits, so plain int64 arithmetic
    suffices and this is several times faster than the Mersenne path.
    """
    if p >= 1 << 31:
        raise ValueError("rank_mod_small needs p < 2^31")
    a = np.array(a, dtype=np.int64) % p
    if a.ndim != 2 or a.size == 0:
        return 0
    if a.shape[0] > a.shape[1]:
        a = np.ascontiguousarray(a.T)
    nrows, ncols = a.shape
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        nz = np.flatnonzero(a[rank:, col])
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, col]), p - 2, p)
        prow = a[rank, col:] * inv % p
        a[rank, col:] = prow
        below = rank + 1 + np.flatnonzero(a[rank + 1:, col])
        if below.size:
            a[below, col:] = (a[below, col:] - a[below, col][:, None] * prow[None, :]) % p
        rank += 1
    return rank


BLAS_PRIME_LIMIT = 1 << 22
BLAS_PANEL = 32


_NUDGE = 2.0 ** -24


def _reduce(x: np.ndarray, p: float, inv_p: float) -> np.ndarray:
    """x mod p in place, for integral float64 entries with |x| < 2^50.

    The rounded quotient x * inv_p is within 2^-25 of x / p.  A residue
    r > 0 keeps x / p at least 1/p > 2^-22 away from an integer, so only
    r = 0 can round down; the nudge lifts it back without disturbing the
    other cases.
    """
    q = x * inv_p
    q += _NUDGE
    np.floor(q, out=q)
    q *= p
    x -= q
    return x


def rank_mod_blas(a: np.ndarray, p: int, panel: int = BLAS_PANEL) -> int:
    """Rank over F_p for a prime p < 2^22, by blocked elimination in float64.

    Columns are processed in panels.  Inside a panel rows are eliminated
    one pivot at a time; the columns to the right are then updated with a
    single matrix product.  Entries stay below p, so every product of a
    panel (at most ``panel`` terms of size < p^2 < 2^44) is an exact
    integer in double precision.
    """
    if p >= BLAS_PRIME_LIMIT:
        raise ValueError("rank_mod_blas needs p < 2^22")
    a = np.array(np.asarray(a, dtype=np.int64) % p, dtype=np.float64)
    if a.ndim != 2 or a.size == 0:
        return 0
    if a.shape[0] > a.shape[1]:
        a = np.ascontiguousarray(a.T)
    nrows, ncols = a.shape
    fp, inv_p = float(p), 1.0 / p
    mults = np.zeros((nrows, panel))
    invs = [0] * panel
    rank = 0
    for c0 in range(0, ncols, panel):
        if rank == nrows:
            break
        c1 = min(c0 + panel, ncols)
        r0 = rank
        mults[r0:] = 0
        for c in range(c0, c1):
            if rank == nrows:
                break
            nz = np.flatnonzero(a[rank:, c])
            if nz.size == 0:
                continue
            piv = rank + int(nz[0])
            if piv != rank:
                a[[rank, piv]] = a[[piv, rank]]
                mults[[rank, piv]] = mults[[piv, rank]]
            inv = pow(int(a[rank, c]), p - 2, p)
            invs[rank - r0] = inv
            a[rank, c:c1] = _reduce(a[rank, c:c1] * inv, fp, inv_p)
            f = a[rank + 1:, c].copy()
            if f.any():
                blk = a[rank + 1:, c:c1]
                blk -= np.outer(f, a[rank, c:c1])  # stays above -p^2, exact
                _reduce(blk, fp, inv_p)
                mults[rank + 1:, rank - r0] = f
            rank += 1
        k = rank - r0
        if k == 0 or c1 == ncols:
            continue
        # replay the panel's pivot-row operations on the columns to the right
        upper = a[r0:rank, c1:]
        for i in range(k):
            row = upper[i]
            if i:
                row -= _reduce(mults[r0 + i, :i] @ upper[:i], fp, inv_p)
            upper[i] = _reduce(row * invs[i], fp, inv_p)
        if rank < nrows:
            rest = a[rank:, c1:]
            rest -= _reduce(mults[rank:, :k] @ upper, fp, inv_p)
            _reduce(rest, fp, inv_p)
    return rank


def rank_mod_word(a: np.ndarray, p: int) -> int:
    """Rank over a prime p < 2^22, picking the faster routine for the size."""
    a = np.asarray(a)
    if a.ndim == 2 and min(a.shape) >= 120:
        return rank_mod_blas(a, p)
    return rank_mod_small(a, p)


def rank_mod_p(rows: Sequence[Sequence[int]] | np.ndarray, p: int = MERSENNE61) -> int:
    """Rank over F_p of an integer matrix given as rows of residues."""
    if p == MERSENNE61:
        if isinstance(rows, np.ndarray) and rows.dtype == np.uint64:
            a = rows
        else:
            a = np.asarray([[int(v) % p for v in r] for r in rows], dtype=np.uint64)
        if a.ndim != 2 or a.size == 0:
            return 0
        if a.shape[0] > a.shape[1]:
            a = np.ascontiguousarray(a.T)
        return _rank_m61(a)
    a = np.array([[int(v) % p for v in r] for r in rows], dtype=object)
    if a.ndim != 2 or a.size == 0:
        return 0
    if a.shape[0] > a.shape[1]:
        a = a.T.copy()
    return _rank_generic(a, p)


def rank_fraction_free(rows: Sequence[Sequence[int | Fraction]]) -> int:
    """Exact rank over Q by fraction-free (Bareiss) elimination.

    Rational rows are first scaled to integer rows.
    """
    mat = []
    for r in rows:
        den = lcm(*(Fraction(v).denominator for v in r)) if r else 1
        mat.append([int(Fraction(v) * den) for v in r])
    if not mat or not mat[0]:
        return 0
    nrows, ncols = len(mat), len(mat[0])
    prev = 1
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        piv = next((i for i in range(rank, nrows) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        pivot_row = mat[rank]
        pv = pivot_row[col]
        for i in range(rank + 1, nrows):
            row = mat[i]
            f = row[col]
            if f == 0:
                # exact division still required to keep entries as minors
                for j in range(col + 1, ncols):
                    row[j] = (pv * row[j]) // prev
            else:
                for j in range(col + 1, ncols):
                    row[j] = (pv * row[j] - f * pivot_row[j]) // prev
            row[col] = 0
        prev = pv
        rank += 1
    return rank
