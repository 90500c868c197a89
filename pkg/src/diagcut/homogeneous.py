"""Homogeneous systems ``L_d(m^xr)``: the finite base set, the inductive
table built from layer cuts, and a small Hirschowitz-Harbourne campaign.

Two facts about adding or removing base points are used throughout.  If
``L_d(m^xq)`` is non-special with ``vdim >= -1`` then so is every
``L_d(m^xp)`` with ``p < q`` (each removed point frees at most its own
conditions).  If ``L_d(m^xq)`` is empty then so is every system with more
points.  Both are called *restriction* below.
"""

from __future__ import annotations

import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .config import RunConfig
from .cutting.certificate import FORMAT_VERSION, MODULAR, CutCertificate, RankLeaf, verify
from .cutting.lemmas import base_leaf, eols, eols_certificates, theorem_finitely_step
from .errors import BaseCaseFails, CertificateFormatError
from .interp import CERTIFIED, LinearSystem, generic_dimension
from .negcurve import DivisorClass, find_witness, predicted_dimension, system_class

DESK_M_MAX = 5
DESK_D_MAX = 30

SPECIAL = "Special"
NONSPECIAL = "NonSpecial"


def _size(d: int) -> int:
    return (d + 1) * (d + 2) // 2


def _conds(m: int) -> int:
    return m * (m + 1) // 2


def homogeneous_vdim(d: int, m: int, r: int) -> int:
    return _size(d) - 1 - r * _conds(m)


def first_empty(d: int, m: int) -> int:
    """Smallest ``r`` with ``vdim L_d(m^xr) <= -1``."""
    return -(-_size(d) // _conds(m))


@dataclass(frozen=True)
class HomogeneousFamily:
    m: int
    d_range: range
    r_range: range

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be positive")

    def __iter__(self) -> Iterator[LinearSystem]:
        for d in self.d_range:
            for r in self.r_range:
                yield LinearSystem.plane(d, (self.m,) * r)


# -- the finite base set -----------------------------------------------------


def default_d0(m: int) -> int:
    return 3 * m


def s_set(m: int, d0: int | None = None) -> list[LinearSystem]:
    """End-of-layer systems for ``m`` followed by every ``L_d(m^xr)``, r >= 1,
    with ``d0 <= d <= d0 + m(m+1)`` and ``vdim >= -2m^2``."""
    if m < 1:
        raise ValueError("m must be positive")
    d0 = default_d0(m) if d0 is None else d0
    if d0 < 1:
        raise ValueError("d0 must be positive")
    out = list(eols(m))
    floor = -2 * m * m
    for d in range(d0, d0 + m * (m + 1) + 1):
        r = 1
        while homogeneous_vdim(d, m, r) >= floor:
            out.append(LinearSystem.plane(d, (m,) * r))
            r += 1
    return out


# -- the inductive table -----------------------------------------------------

RANK = "rank"
EMPTY = "empty"
STEP = "step"
RESTRICTION = "restriction"


@dataclass(frozen=True)
class FinitelyEntry:
    d: int
    p: int
    method: str
    source: tuple[int, int] | None = None
    certificate: CutCertificate | None = field(default=None, compare=False, repr=False)


@dataclass
class FinitelyTable:
    """Non-speciality of ``L_d(m^xp)`` for ``d_low <= d <= max_d``.

    Entries cover ``0 <= p <= first_empty(d, m)``; every larger ``p`` is
    empty by restriction from the last entry.
    """

    m: int
    d_low: int
    max_d: int
    entries: dict[tuple[int, int], FinitelyEntry] = field(default_factory=dict)
    verified_steps: int = 0

    def methods(self) -> Counter:
        return Counter(e.method for e in self.entries.values())


def verify_finitely(m: int, d_low: int, max_d: int, config: RunConfig | None = None) -> FinitelyTable:
    """Check the base window by rank, then certify every higher degree by a
    layer cut onto degree ``d - m(m+1)``.

    Raises :class:`BaseCaseFails` at the first special base system, scanning
    ``d`` then ``p`` upwards.
    """
    if m < 1 or d_low < 1:
        raise ValueError("m and d_low must be positive")
    config = config or RunConfig()
    h = m * (m + 1)
    table = FinitelyTable(m, d_low, max_d)
    top_base = min(max_d, d_low + h)
    leaves: dict[tuple[int, int], CutCertificate] = {}

    for d in range(d_low, top_base + 1):
        for p in range(first_empty(d, m) + 1):
            system = LinearSystem.plane(d, (m,) * p)
            if p == 0:
                table.entries[d, p] = FinitelyEntry(d, p, EMPTY, certificate=base_leaf(system, config))
                continue
            res = generic_dimension(system, config.trials, config.seed, config.prime)
            if res.certainty != CERTIFIED:
                raise BaseCaseFails(d, p, f"dim <= {res.value}, edim = {res.edim}")
            table.entries[d, p] = FinitelyEntry(d, p, RANK, certificate=RankLeaf(system, MODULAR, config.seed, config.trials))

    if max_d <= d_low + h:
        return table

    eols_certs = eols_certificates(m, config)
    cache: dict = {}
    for d in range(d_low + h + 1, max_d + 1):
        layer = 2 * d - h + 3
        for p in range(first_empty(d, m) + 1):
            if p < layer:
                table.entries[d, p] = FinitelyEntry(d, p, RESTRICTION, source=(d, layer))
                continue
            key = (d - h, p - layer)
            leaves[key] = _certificate_for(table, key, config)
            cert = theorem_finitely_step(m, d, p, d_low, leaves, eols_certs, config, lazy=True)
            report = verify(cert, config, cache=cache)
            if not report.verified:
                raise BaseCaseFails(d, p, report.conclusion())
            table.verified_steps += 1
            table.entries[d, p] = FinitelyEntry(d, p, STEP, source=key, certificate=cert)
    return table


def _certificate_for(table: FinitelyTable, key: tuple[int, int], config: RunConfig) -> CutCertificate:
    entry = table.entries[key]
    if entry.certificate is not None:
        return entry.certificate
    # proved by restriction, which has no certificate node; check it directly
    d, p = key
    system = LinearSystem.plane(d, (table.m,) * p)
    return base_leaf(system, config)


# -- the campaign ------------------------------------------------------------


@dataclass(frozen=True)
class CampaignRecord:
    d: int
    m: int
    r: int
    dim: int
    edim: int
    verdict: str
    seed: int
    witness: DivisorClass | None = None
    pairing: int | None = None
    predicted: int | None = None
    certificate: str | None = None

    def __post_init__(self):
        if self.verdict == SPECIAL and not self.dim > self.edim:
            raise ValueError("a special record needs dim > edim")
        if self.verdict == NONSPECIAL and self.dim != self.edim:
            raise ValueError("a non-special record needs dim = edim")

    @property
    def system_id(self) -> tuple[int, int, int]:
        return (self.d, self.m, self.r)

    @property
    def discrepancy(self) -> bool:
        """Rank and the (-1)-curve picture disagree."""
        special = self.verdict == SPECIAL
        if special and self.witness is None:
            return True
        if not special and self.witness is not None and self.dim >= 0:
            return True
        return self.predicted is not None and self.predicted != self.dim

    def to_json(self) -> dict:
        return {
            "version": FORMAT_VERSION,
            "d": self.d,
            "m": self.m,
            "r": self.r,
            "dim": self.dim,
            "edim": self.edim,
            "verdict": self.verdict,
            "seed": self.seed,
            "witness": None if self.witness is None else self.witness.to_json(),
            "pairing": self.pairing,
            "predicted": self.predicted,
            "certificate": self.certificate,
            "discrepancy": self.discrepancy,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CampaignRecord":
        if obj.get("version") != FORMAT_VERSION:
            raise CertificateFormatError(f"unsupported record version {obj.get('version')!r}")
        w = obj.get("witness")
        return cls(
            obj["d"], obj["m"], obj["r"], obj["dim"], obj["edim"], obj["verdict"], obj["seed"],
            None if w is None else DivisorClass.from_json(w),
            obj.get("pairing"),
            obj.get("predicted"),
            obj.get("certificate"),
        )


def campaign_record(d: int, m: int, r: int, config: RunConfig) -> CampaignRecord:
    system = LinearSystem.plane(d, (m,) * r)
    res = generic_dimension(system, config.trials, config.seed, config.prime)
    verdict = SPECIAL if res.value > res.edim else NONSPECIAL
    found = find_witness(system)
    witness, value = found if found else (None, None)
    return CampaignRecord(
        d, m, r, res.value, res.edim, verdict, config.seed,
        witness, value, predicted_dimension(system_class(system)),
    )


def _campaign_cell(args) -> list[CampaignRecord]:
    d, m, config = args
    records = []
    limit = _size(d) + 2 * m * m
    r = 1
    while True:
        rec = campaign_record(d, m, r, config)
        records.append(rec)
        # past the cutoff one record confirms emptiness and the scan stops
        if r * _conds(m) > limit:
            break
        r += 1
    return records


def hh_campaign(
    m_max: int,
    d_max: int,
    config: RunConfig | None = None,
    *,
    m_min: int = 1,
    d_min: int = 1,
) -> list[CampaignRecord]:
    """Rank every ``L_d(m^xr)`` in range and compare with the (-1)-curve
    prediction.  Records come back sorted by ``(m, d, r)``."""
    config = config or RunConfig()
    if m_max > DESK_M_MAX or d_max > DESK_D_MAX:
        raise ValueError(f"campaign limited to m <= {DESK_M_MAX}, d <= {DESK_D_MAX}")
    cells = [(d, m, config) for m in range(m_min, m_max + 1) for d in range(d_min, d_max + 1)]
    merged: dict[tuple[int, int, int], CampaignRecord] = {}
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            chunks = pool.map(_campaign_cell, cells)
            for chunk in chunks:
                merged.update((rec.system_id, rec) for rec in chunk)
    else:
        for cell in cells:
            merged.update((rec.system_id, rec) for rec in _campaign_cell(cell))
    return sorted(merged.values(), key=lambda rec: (rec.m, rec.d, rec.r))


def dumps_records(records: Iterable[CampaignRecord]) -> str:
    """One JSON object per line."""
    return "".join(json.dumps(rec.to_json(), sort_keys=True) + "\n" for rec in records)


def loads_records(text: str) -> list[CampaignRecord]:
    return [CampaignRecord.from_json(json.loads(line)) for line in text.splitlines() if line.strip()]


def summary_table(records: Iterable[CampaignRecord]) -> str:
    """Per ``(m, d)`` counts, then the special systems by name."""
    counts: dict[tuple[int, int], Counter] = {}
    specials = []
    for rec in records:
        if rec.verdict == SPECIAL:
            specials.append(f"L_{rec.d}({rec.m}^x{rec.r})")
        c = counts.setdefault((rec.m, rec.d), Counter())
        c[rec.verdict] += 1
        c["discrepancy"] += rec.discrepancy
    lines = [f"{'m':>3} {'d':>3} {'special':>8} {'nonspecial':>10} {'flagged':>8}"]
    for (m, d), c in sorted(counts.items()):
        lines.append(f"{m:>3} {d:>3} {c[SPECIAL]:>8} {c[NONSPECIAL]:>10} {c['discrepancy']:>8}")
    total = sum(c["discrepancy"] for c in counts.values())
    lines.append(f"special systems: {', '.join(specials) if specials else 'none'}")
    lines.append(f"discrepancies: {total}")
    return "\n".join(lines)
