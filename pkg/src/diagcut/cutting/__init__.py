"""Diagram-cutting certificates: construction, search and checking."""

from .certificate import (
    FORMAT_VERSION,
    MODULAR,
    ONEMULT,
    CutCertificate,
    CutNode,
    EmptyLeaf,
    EquivLeaf,
    LemmaLeaf,
    ProofReport,
    RankLeaf,
    cut_children,
    cut_depth,
    dumps,
    loads,
    node_count,
    verify,
)
from .lemmas import (
    backtriangle_diagram,
    eols,
    eols_certificates,
    eols_diagram,
    expand_lemma,
    extend_by_layer,
    layer_diagram,
    lemma_backtriangle,
    lemma_fatlayer,
    lemma_fulllayer,
    lemma_singlelayer,
    lemma_twotriangles,
    theorem_finitely_step,
    twotriangles_diagram,
)
from .search import search_cut_proof


def apply_cut(system, cut, mult_split):
    """(L1, L2) for a legal cut; raises if L2 does not have vdim -1."""
    from ..errors import VdimMismatch

    l1, l2 = cut_children(system, cut, mult_split)
    if l2.vdim != -1:
        raise VdimMismatch(len(l2.diagram), l2.conditions)
    return l1, l2
