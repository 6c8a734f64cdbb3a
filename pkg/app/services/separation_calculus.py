"""Nestedness of separations, crossing lemmas, circuit switching and goodness."""
import logging
from dataclasses import dataclass
from typing import Sequence

from app.errors import (
    Disconnected,
    GroundSetMismatch,
    LemmaFailure,
    NotACircuit,
    NotCrossing,
    PreconditionViolated,
    QuadrantTooSmall,
)
from app.services.connectivity import Separation, enumerate_separations, phi, separation_of
from app.services.matroid_kernel import Matroid, is_connected, is_subset, popcount

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Quadrants:
    q11: int
    q12: int
    q21: int
    q22: int

    def parts(self) -> tuple[int, int, int, int]:
        return (self.q11, self.q12, self.q21, self.q22)


def quadrants(s1: Separation, s2: Separation) -> Quadrants:
    if s1.ground != s2.ground:
        raise GroundSetMismatch("separations live on different ground sets")
    return Quadrants(
        s1.side_a & s2.side_a,
        s1.side_a & s2.side_b,
        s1.side_b & s2.side_a,
        s1.side_b & s2.side_b,
    )


def are_nested(s1: Separation, s2: Separation) -> bool:
    return any(q == 0 for q in quadrants(s1, s2).parts())


def nested_by_containment(s1: Separation, s2: Separation) -> bool:
    """Nestedness as "one of the four sides contains another"."""
    if s1.ground != s2.ground:
        raise GroundSetMismatch("separations live on different ground sets")
    a, ac, b, bc = s1.side_a, s1.side_b, s2.side_a, s2.side_b
    return is_subset(a, b) or is_subset(a, bc) or is_subset(ac, b) or is_subset(ac, bc)


def _require_2separation(M: Matroid, s: Separation) -> None:
    found = separation_of(M, s.side_a)
    if found is None or found.order != 2 or s.ground != M.full:
        raise PreconditionViolated("2-separation", f"{M.labels(s.side_a)} is not a 2-separation side")


def _require_crossing(s1: Separation, s2: Separation) -> None:
    if are_nested(s1, s2):
        raise NotCrossing("the separations are nested")


def corner(M: Matroid, s1: Separation, s2: Separation) -> Separation:
    _require_crossing(s1, s2)
    _require_2separation(M, s1)
    _require_2separation(M, s2)
    X = s1.side_a & s2.side_a
    if popcount(X) < 2 or popcount(M.complement(X)) < 2:
        raise QuadrantTooSmall(f"corner {M.labels(X)} or its complement has fewer than 2 elements")
    if phi(M, X) != 1:
        logger.error("corner lemma fails on %s", M.labels(X))
        raise LemmaFailure("corner lemma", f"phi({M.labels(X)}) = {phi(M, X)}")
    return Separation(X, M.complement(X), 2)


def symmetric_difference_sep(M: Matroid, s1: Separation, s2: Separation) -> Separation:
    _require_crossing(s1, s2)
    _require_2separation(M, s1)
    _require_2separation(M, s2)
    X = s1.side_a ^ s2.side_a
    if phi(M, X) != 1:
        logger.error("symmetric difference lemma fails on %s", M.labels(X))
        raise LemmaFailure("symmetric difference lemma", f"phi({M.labels(X)}) = {phi(M, X)}")
    return Separation(X, M.complement(X), 2)


def is_good(M: Matroid, s: Separation, all_seps: Sequence[Separation]) -> bool:
    return all(are_nested(s, t) for t in all_seps)


def good_separations(M: Matroid, k: int) -> list[Separation]:
    if not is_connected(M):
        raise Disconnected("good separations need a connected matroid")
    seps = enumerate_separations(M, k)
    good = [s for s in seps if is_good(M, s, seps)]
    logger.debug("%d of %d separations of order %d are good", len(good), len(seps), k)
    return good


def good_2separations(M: Matroid) -> list[Separation]:
    return good_separations(M, 2)


def crosses_circuit(C: int, s: Separation) -> bool:
    return bool(C & s.side_a) and bool(C & s.side_b)


def _require_circuit(M: Matroid, C: int) -> None:
    if C not in M.circuits:
        raise NotACircuit(f"{M.labels(C)} is not a circuit")


def switch_circuits(M: Matroid, C1: int, C2: int, s: Separation) -> int:
    _require_circuit(M, C1)
    _require_circuit(M, C2)
    if not (crosses_circuit(C1, s) and crosses_circuit(C2, s)):
        raise NotCrossing("both circuits must cross the separation")
    switched = (C1 & s.side_a) | (C2 & s.side_b)
    if switched not in M.circuits:
        logger.error("switching lemma fails: %s", M.labels(switched))
        raise LemmaFailure("switching lemma", f"{M.labels(switched)} is not a circuit")
    return switched


def infinite_switch(M: Matroid, C1: int, C2: int, family: Sequence[int]) -> int:
    """Switch C1 onto C2 inside the union of a disjoint family of 2-separation sides."""
    _require_circuit(M, C1)
    _require_circuit(M, C2)
    union = 0
    members = []
    for i, side in enumerate(family):
        if union & side:
            raise PreconditionViolated("pairwise disjoint", f"member {i} meets an earlier member")
        union |= side
        s = separation_of(M, side)
        if s is None or s.order != 2:
            raise PreconditionViolated("2-separation sides", f"member {i} is not a 2-separation side")
        members.append(s)
    outside = M.complement(union)
    if C1 & outside and not C2 & outside:
        raise PreconditionViolated("(2) C2 meets the complement of the union if C1 does")
    for i, s in enumerate(members):
        if not (crosses_circuit(C1, s) and crosses_circuit(C2, s)):
            raise PreconditionViolated("(1) circuits cross every member", f"member {i}")
    switched = (C1 & union) | (C2 & outside)
    if switched not in M.circuits:
        logger.error("infinite switching lemma fails: %s", M.labels(switched))
        raise LemmaFailure("infinite switching lemma", f"{M.labels(switched)} is not a circuit")
    return switched
