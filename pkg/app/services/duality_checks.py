"""Duality verifiers: separations, localizations and the canonical decomposition commute with taking duals."""
import logging
import random
from dataclasses import dataclass
from typing import Sequence

from app.config import settings
from app.errors import LemmaFailure
from app.services.connectivity import separation_of
from app.services.decomposition import TorsoKind, build_tree, decompositions_isomorphic, kind_counts
from app.services.localization import localize
from app.services.matroid_kernel import (
    Matroid,
    bases,
    check_cap,
    dual,
    extend_to_maximal_independent,
    popcount,
    random_basis,
    same_matroid,
)

logger = logging.getLogger(__name__)

_SWAPPED = {
    TorsoKind.CIRCUIT: TorsoKind.COCIRCUIT,
    TorsoKind.COCIRCUIT: TorsoKind.CIRCUIT,
    TorsoKind.THREE_CONNECTED: TorsoKind.THREE_CONNECTED,
}


@dataclass
class DualityReport:
    check: str
    checked: int


def _fail(which: str, detail: str) -> LemmaFailure:
    logger.error("%s fails: %s", which, detail)
    return LemmaFailure(which, detail)


def verify_sep_dual(M: Matroid) -> DualityReport:
    check_cap(M, "separation duality")
    D = dual(M)
    for X in range(M.full + 1):
        primal, dualized = separation_of(M, X), separation_of(D, X)
        if (primal.order if primal else None) != (dualized.order if dualized else None):
            raise _fail("separations of the dual", f"{M.labels(X)}: {primal} against {dualized}")
    return DualityReport("separations of the dual", M.full + 1)


def verify_dif_bases(M: Matroid, S: int, trials: int | None = None, rng: random.Random | None = None) -> DualityReport:
    """Extending B∩S in M|S adds as many elements as extending B∁∩S∁ in M*|S∁."""
    all_bases = bases(M)
    if len(all_bases) <= settings.DIF_BASES_EXHAUSTIVE_LIMIT:
        chosen = list(all_bases)
    else:
        rng = rng or random.Random(settings.RANDOM_SEED)
        chosen = [random_basis(M, M.full, rng) for _ in range(trials or settings.DIF_BASES_TRIALS)]
    D = dual(M)
    Sc = M.complement(S)
    for B in chosen:
        B_star = M.complement(B)
        B_S = extend_to_maximal_independent(M, B & S, S)
        B_star_Sc = extend_to_maximal_independent(D, B_star & Sc, Sc)
        f, f_star = popcount(B_S & ~B), popcount(B_star_Sc & ~B_star)
        if f != f_star:
            raise _fail("basis differences under duality", f"B = {M.labels(B)}: {f} != {f_star}")
    return DualityReport("basis differences under duality", len(chosen))


def verify_local_dual(M: Matroid, family: Sequence[int]) -> DualityReport:
    dual_of_local = dual(localize(M, family).local)
    local_of_dual = localize(dual(M), family).local
    if local_of_dual != dual_of_local:
        raise _fail("localization of the dual", f"family {[M.labels(X) for X in family]}")
    return DualityReport("localization of the dual", 1)


def verify_dual_decomposition(M: Matroid) -> DualityReport:
    tree, dual_tree = build_tree(M), build_tree(dual(M))
    mapping = decompositions_isomorphic(tree, dual_tree)
    if mapping is None:
        raise _fail("decomposition of the dual", "the trees of M and M* are not isomorphic")
    for v, w in mapping.items():
        if not same_matroid(dual(tree.torsos[v]), dual_tree.torsos[w]):
            raise _fail("decomposition of the dual", f"torso of {w} in M* is not the dual of torso {v}")
        if dual_tree.kinds[w] != _SWAPPED[tree.kinds[v]]:
            raise _fail("decomposition of the dual", f"kind {tree.kinds[v].value} at {v} maps to {dual_tree.kinds[w].value}")
    expected = {_SWAPPED[kind]: count for kind, count in kind_counts(tree).items()}
    if kind_counts(dual_tree) != expected:
        raise _fail("decomposition of the dual", "torso kind counts do not swap")
    return DualityReport("decomposition of the dual", len(mapping))
