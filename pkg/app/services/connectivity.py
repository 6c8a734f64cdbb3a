"""Connectivity function, separations and n-connectedness."""
import logging
import random
from dataclasses import dataclass
from typing import Iterable

from app.errors import DependentInput, LemmaFailure, PreconditionViolated
from app.services.matroid_kernel import (
    Matroid,
    check_cap,
    extend_to_maximal_independent,
    is_independent,
    is_subset,
    popcount,
    random_basis,
    subset_key,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Separation:
    side_a: int
    side_b: int
    order: int

    @property
    def ground(self) -> int:
        return self.side_a | self.side_b

    @property
    def key(self) -> int:
        """The side holding ground element 0; shared by a separation and its inversion."""
        return self.side_a if self.side_a & 1 else self.side_b

    def inverted(self) -> "Separation":
        return Separation(self.side_b, self.side_a, self.order)

    def oriented(self, side: int) -> "Separation":
        return self if side == self.side_a else self.inverted()


def del_(M: Matroid, I: int, J: int) -> int:
    """Fewest elements to drop from I ∪ J to leave an independent set."""
    for part in (I, J):
        if not is_independent(M, part):
            raise DependentInput(f"{M.labels(part)} is dependent")
    union = I | J
    return popcount(union) - M.rank_of(union)


def phi_by_bases(M: Matroid, X: int) -> int:
    B_X = extend_to_maximal_independent(M, 0, X)
    B_Y = extend_to_maximal_independent(M, 0, M.complement(X))
    return del_(M, B_X, B_Y)


def phi_rank_identity(M: Matroid, X: int) -> int:
    return M.rank_of(X) + M.rank_of(M.complement(X)) - M.rank_of(M.full)


def phi(M: Matroid, X: int) -> int:
    # equal to phi_by_bases; the rank route hits the rank cache
    return phi_rank_identity(M, X)


def del_invariant(M: Matroid, X: int, trials: int, rng: random.Random) -> set[int]:
    """del values over randomly chosen bases of X and X∁; a singleton when well defined."""
    Y = M.complement(X)
    return {del_(M, random_basis(M, X, rng), random_basis(M, Y, rng)) for _ in range(trials)}


def separation_of(M: Matroid, X: int) -> Separation | None:
    k = phi(M, X)
    if popcount(X) >= k + 1 and popcount(M.complement(X)) >= k + 1:
        return Separation(X, M.complement(X), k + 1)
    return None


def enumerate_separations(M: Matroid, k: int) -> list[Separation]:
    """All separations of order exactly ``k``, one per key, in canonical key order."""
    check_cap(M, "separation enumeration")
    found = []
    # masks with bit 0 set are exactly the keys
    for X in range(1, M.full, 2):
        if popcount(X) < k or popcount(M.full ^ X) < k:
            continue
        if phi(M, X) == k - 1:
            found.append(Separation(X, M.full ^ X, k))
    found.sort(key=lambda s: subset_key(s.side_a))
    logger.debug("found %d separations of order %d on %d elements", len(found), k, M.size)
    return found


def enumerate_2separations(M: Matroid) -> list[Separation]:
    return enumerate_separations(M, 2)


def is_n_connected(M: Matroid, n: int) -> bool:
    check_cap(M, "n-connectivity")
    return all(not enumerate_separations(M, order) for order in range(1, n))


def nested_limit(M: Matroid, chain: Iterable[int], k: int) -> Separation | None:
    """Intersect a ⊆-chain of k-separation sides.

    Returns ``None`` when the intersection has fewer than ``k`` elements,
    otherwise its separation, whose order is at most ``k``.
    """
    chain = sorted(chain, key=popcount)
    if not chain:
        raise PreconditionViolated("nonempty chain")
    for smaller, larger in zip(chain, chain[1:]):
        if not is_subset(smaller, larger):
            raise PreconditionViolated("⊆-chain", f"{M.labels(smaller)} ⊄ {M.labels(larger)}")
    for side in chain:
        s = separation_of(M, side)
        if s is None or s.order != k:
            raise PreconditionViolated("k-separation sides", f"{M.labels(side)} is not a {k}-separation side")
    meet = chain[0]
    for side in chain[1:]:
        meet &= side
    if popcount(meet) < k:
        return None
    s = separation_of(M, meet)
    if s is None or s.order > k:
        raise LemmaFailure("nested limit", f"intersection {M.labels(meet)} is no separation of order <= {k}")
    return s
