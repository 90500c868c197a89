"""Cut certificates and their checker.

Every node of a certificate claims that its ``system`` is non-special.

* ``EmptyLeaf``: no base points, so dim = |D| - 1 = vdim.
* ``RankLeaf``: direct check, either the single-multiplicity criterion
  (``onemult``) or a seeded modular rank computation (``modular``).
* ``EquivLeaf``: the diagram translated by ``translation`` is the diagram of
  ``inner``; dimension is translation invariant.
* ``CutNode``: the cut splits D into D1 (F < 0) and D2 (F > 0); the base
  points listed in ``mult_split`` go to D2.  If L2 is non-special with
  vdim -1 then dim L <= dim L1, and since vdim L = vdim L1 this makes L
  non-special whenever L1 is.
* ``LemmaLeaf``: stands for the tree produced by a named lemma constructor.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Union

from ..config import RunConfig
from ..diagram import AffineCut, split, translate
from ..errors import CertificateFormatError, NegativeCoordinate, PointOnCutLine
from ..interp import CERTIFIED, LinearSystem, generic_dimension, onemult_check

FORMAT_VERSION = 1

ONEMULT = "onemult"
MODULAR = "modular"


@dataclass(frozen=True)
class EmptyLeaf:
    system: LinearSystem


@dataclass(frozen=True)
class RankLeaf:
    system: LinearSystem
    strategy: str = MODULAR
    seed: int | None = None
    trials: int | None = None


@dataclass(frozen=True)
class EquivLeaf:
    system: LinearSystem
    translation: tuple[int, int]
    inner: "CutCertificate"


@dataclass(frozen=True)
class CutNode:
    system: LinearSystem
    cut: AffineCut
    mult_split: tuple[int, ...]
    sub2: "CutCertificate"
    sub1: "CutCertificate"


@dataclass(frozen=True)
class LemmaLeaf:
    system: LinearSystem
    name: str
    params: tuple[int, ...]


CutCertificate = Union[EmptyLeaf, RankLeaf, EquivLeaf, CutNode, LemmaLeaf]


def cut_children(system: LinearSystem, cut: AffineCut, mult_split) -> tuple[LinearSystem, LinearSystem]:
    """(L1, L2) for a cut, without checking the vdim hypothesis."""
    d1, d2 = split(system.diagram, cut)
    chosen = set(mult_split)
    if len(chosen) != len(mult_split) or any(not 0 <= i < len(system.mults) for i in chosen):
        raise ValueError(f"bad multiplicity index set {tuple(mult_split)}")
    m2 = tuple(system.mults[i] for i in sorted(chosen))
    m1 = tuple(m for i, m in enumerate(system.mults) if i not in chosen)
    return LinearSystem(d1, m1), LinearSystem(d2, m2)


def node_count(cert: CutCertificate) -> int:
    if isinstance(cert, CutNode):
        return 1 + node_count(cert.sub1) + node_count(cert.sub2)
    if isinstance(cert, EquivLeaf):
        return 1 + node_count(cert.inner)
    return 1


def cut_depth(cert: CutCertificate) -> int:
    """Largest number of nested CutNodes on any path."""
    if isinstance(cert, CutNode):
        return 1 + max(cut_depth(cert.sub1), cut_depth(cert.sub2))
    if isinstance(cert, EquivLeaf):
        return cut_depth(cert.inner)
    return 0


# -- checking --------------------------------------------------------------

@dataclass
class ProofReport:
    verified: bool
    system: LinearSystem
    node_count: int = 0
    leaves: Counter = field(default_factory=Counter)
    failure_path: tuple[str, ...] = ()
    failure_reason: str = ""
    detail: str = ""

    @property
    def dimension(self) -> int | None:
        return self.system.edim if self.verified else None

    def conclusion(self) -> str:
        if not self.verified:
            where = "/".join(self.failure_path) or "root"
            return f"NOT VERIFIED at {where}: {self.failure_reason} {self.detail}".rstrip()
        s = self.system
        if s.vdim <= -1:
            return f"VERIFIED: {s.describe()} is non-special, dim = -1"
        return f"VERIFIED: {s.describe()} is non-special, dim = edim = {s.edim}"


class _Failure(Exception):
    def __init__(self, path, reason, detail=""):
        super().__init__(reason)
        self.path = tuple(path)
        self.reason = reason
        self.detail = detail


def verify(cert: CutCertificate, config: RunConfig | None = None, *, cache: dict | None = None) -> ProofReport:
    """Re-check every node of ``cert``.  Failures are reported, not raised.

    ``cache`` remembers already verified subtrees (by identity) and lemma
    expansions (by name and parameters) together with their node and leaf
    counts.  It may be shared between calls made with the same config.
    """
    config = config or RunConfig()
    report = ProofReport(False, cert.system)
    cache = {} if cache is None else cache
    try:
        _check(cert, config, ("root",), report, cache)
    except _Failure as exc:
        report.failure_path = exc.path
        report.failure_reason = exc.reason
        report.detail = exc.detail
        return report
    report.verified = True
    return report


def _check(node, config, path, report, cache):
    hit = cache.get(id(node))
    if hit is not None and hit[0] is node:
        report.node_count += hit[1]
        report.leaves.update(hit[2])
        return
    count_before, leaves_before = report.node_count, report.leaves.copy()
    report.node_count += 1
    sys_ = node.system
    if isinstance(node, EmptyLeaf):
        if sys_.mults:
            raise _Failure(path, "NotEmpty", "empty leaf carries base points")
        report.leaves["empty"] += 1
    elif isinstance(node, RankLeaf):
        _check_rank_leaf(node, config, path)
        report.leaves[f"rank:{node.strategy}"] += 1
    elif isinstance(node, EquivLeaf):
        try:
            moved = translate(sys_.diagram, node.translation)
        except NegativeCoordinate as exc:
            raise _Failure(path, "TranslationMismatch", str(exc))
        if moved != node.inner.system.diagram or sorted(sys_.mults) != sorted(node.inner.system.mults):
            raise _Failure(path, "TranslationMismatch", f"by {node.translation}")
        report.leaves["equiv"] += 1
        _check(node.inner, config, path + ("inner",), report, cache)
    elif isinstance(node, CutNode):
        try:
            l1, l2 = cut_children(sys_, node.cut, node.mult_split)
        except PointOnCutLine as exc:
            raise _Failure(path, "PointOnCutLine", str(exc.point))
        except ValueError as exc:
            raise _Failure(path, "BadSplit", str(exc))
        if l2.vdim != -1:
            raise _Failure(path, "VdimMismatch", f"|D2| = {len(l2.diagram)}, conditions = {l2.conditions}")
        if not l2.same_system(node.sub2.system):
            raise _Failure(path + ("sub2",), "SystemMismatch", f"expected {l2.describe()}")
        if not l1.same_system(node.sub1.system):
            raise _Failure(path + ("sub1",), "SystemMismatch", f"expected {l1.describe()}")
        _check(node.sub2, config, path + ("sub2",), report, cache)
        _check(node.sub1, config, path + ("sub1",), report, cache)
    elif isinstance(node, LemmaLeaf):
        from .lemmas import expand_lemma

        # a lemma's tree depends only on its name and parameters
        key = ("lemma", node.name, node.params)
        done = cache.get(key)
        if done is not None and done[0].same_system(sys_):
            report.node_count += done[1]
            report.leaves.update(done[2])
            report.leaves[f"lemma:{node.name}"] += 1
            cache[id(node)] = (node, report.node_count - count_before, report.leaves - leaves_before)
            return
        try:
            tree = expand_lemma(node.name, node.params, config)
        except Exception as exc:  # constructor rejected the parameters
            raise _Failure(path, "BadLemma", f"{node.name}{node.params}: {exc}")
        if not tree.system.same_system(sys_):
            raise _Failure(path, "SystemMismatch", f"lemma {node.name}{node.params} proves {tree.system.describe()}")
        report.leaves[f"lemma:{node.name}"] += 1
        inner_before, inner_leaves = report.node_count, report.leaves.copy()
        _check(tree, config, path + (f"lemma:{node.name}",), report, cache)
        cache[key] = (tree.system, report.node_count - inner_before, report.leaves - inner_leaves)
    else:
        raise _Failure(path, "UnknownNode", type(node).__name__)
    # keep the node itself so a recycled id can never alias a dead subtree
    cache[id(node)] = (node, report.node_count - count_before, report.leaves - leaves_before)


def _check_rank_leaf(node: RankLeaf, config: RunConfig, path) -> None:
    sys_ = node.system
    if node.strategy == ONEMULT:
        if len(sys_.mults) != 1 or sys_.vdim != -1:
            raise _Failure(path, "OneMultShape", sys_.describe())
        if not onemult_check(sys_.diagram, sys_.mults[0]):
            raise _Failure(path, "RankCheckFailed", "diagram lies on a curve of degree m-1")
    elif node.strategy == MODULAR:
        seed = config.seed if node.seed is None else node.seed
        trials = config.trials if node.trials is None else node.trials
        res = generic_dimension(sys_, trials, seed, config.prime)
        if res.certainty != CERTIFIED:
            raise _Failure(path, "RankCheckFailed", f"dim <= {res.value} but edim = {res.edim}")
    else:
        raise _Failure(path, "UnknownStrategy", node.strategy)


# -- serialization ---------------------------------------------------------

def node_to_json(node: CutCertificate) -> dict:
    base = {"system": node.system.to_json()}
    if isinstance(node, EmptyLeaf):
        return {"kind": "empty", **base}
    if isinstance(node, RankLeaf):
        return {"kind": "rank", **base, "strategy": node.strategy, "seed": node.seed, "trials": node.trials}
    if isinstance(node, EquivLeaf):
        return {"kind": "equiv", **base, "translation": list(node.translation), "inner": node_to_json(node.inner)}
    if isinstance(node, CutNode):
        return {
            "kind": "cut",
            **base,
            "cut": node.cut.to_strings(),
            "mult_split": list(node.mult_split),
            "sub2": node_to_json(node.sub2),
            "sub1": node_to_json(node.sub1),
        }
    if isinstance(node, LemmaLeaf):
        return {"kind": "lemma", **base, "name": node.name, "params": list(node.params)}
    raise TypeError(type(node).__name__)


def node_from_json(obj: dict) -> CutCertificate:
    try:
        kind = obj["kind"]
        system = LinearSystem.from_json(obj["system"])
        if kind == "empty":
            return EmptyLeaf(system)
        if kind == "rank":
            return RankLeaf(system, obj["strategy"], obj.get("seed"), obj.get("trials"))
        if kind == "equiv":
            tx, ty = obj["translation"]
            return EquivLeaf(system, (int(tx), int(ty)), node_from_json(obj["inner"]))
        if kind == "cut":
            return CutNode(
                system,
                AffineCut.from_strings(obj["cut"]),
                tuple(int(i) for i in obj["mult_split"]),
                node_from_json(obj["sub2"]),
                node_from_json(obj["sub1"]),
            )
        if kind == "lemma":
            return LemmaLeaf(system, obj["name"], tuple(int(v) for v in obj["params"]))
    except CertificateFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateFormatError(f"malformed node: {exc}") from exc
    raise CertificateFormatError(f"unknown node kind {kind!r}")


def dumps(cert: CutCertificate, indent: int | None = None) -> str:
    return json.dumps({"version": FORMAT_VERSION, "root": node_to_json(cert)}, indent=indent)


def loads(text: str) -> CutCertificate:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateFormatError(f"not JSON: {exc}") from exc
    if not isinstance(obj, dict) or "version" not in obj:
        raise CertificateFormatError("missing format version")
    if obj["version"] != FORMAT_VERSION:
        raise CertificateFormatError(f"unsupported format version {obj['version']}")
    if "root" not in obj:
        raise CertificateFormatError("missing root node")
    return node_from_json(obj["root"])
