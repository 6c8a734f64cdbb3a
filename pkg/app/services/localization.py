"""Localizations at disjoint families of 2-separation sides, and 2-sums.

A localization collapses each family member X_i to a virtual element. The
local ground set lists the real elements in their original order, followed
by one virtual per member in canonical family order.
"""
import hashlib
import logging
from dataclasses import dataclass
from typing import Sequence

from app.errors import (
    AxiomViolation,
    BadSharedElement,
    DependentInput,
    Disconnected,
    FamilyNotDisjoint,
    LemmaFailure,
    NotA2Separation,
    PreconditionViolated,
)
from app.services.connectivity import Separation, enumerate_2separations, phi, separation_of
from app.services.matroid_kernel import (
    Matroid,
    ValidationLevel,
    bases,
    bits,
    from_masks,
    is_coloop,
    is_connected,
    is_independent,
    is_loop,
    is_subset,
    mask_of,
    popcount,
    restriction,
    subset_key,
)
from app.services.separation_calculus import is_good

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Localization:
    base: Matroid
    family: tuple[int, ...]
    local: Matroid
    real: int

    @property
    def virtual_names(self) -> tuple[str, ...]:
        return self.local.ground[popcount(self.real):]

    def virtual(self, i: int) -> int:
        """Local index of the virtual element standing for family member ``i``."""
        return popcount(self.real) + i


def virtual_label(i: int) -> str:
    return f"@e{i}"


def _phi(real: int, family: Sequence[int], Y: int) -> int:
    image = 0
    for i in bits(Y & real):
        image |= 1 << popcount(real & ((1 << i) - 1))
    offset = popcount(real)
    for i, X in enumerate(family):
        if Y & X:
            image |= 1 << (offset + i)
    return image


def local_matroid(M: Matroid, family: Sequence[int], names: Sequence[str]) -> tuple[Matroid, int]:
    """Circuit images of M at ``family`` without checking the family; returns (local, real)."""
    union = 0
    for X in family:
        union |= X
    real = M.full & ~union
    images = [_phi(real, family, C) for C in M.circuits if not any(is_subset(C, X) for X in family)]
    ground = M.labels(real) + tuple(names)
    try:
        local = from_masks(ground, images, ValidationLevel.ANTICHAIN)
    except AxiomViolation as exc:
        logger.error("circuit images do not form a matroid: %s", exc.detail)
        raise LemmaFailure("localization is a matroid", exc.detail)
    return local, real


def localize(M: Matroid, family: Sequence[int], names: Sequence[str] | None = None) -> Localization:
    """Localization of a connected M at a disjoint family of 2-separation sides.

    ``names`` label the virtual elements, paired with ``family`` before it is
    sorted; by default member i of the sorted family is named ``@e<i>``.
    """
    if not is_connected(M):
        raise Disconnected("localization needs a connected matroid")
    members = list(family)
    for i, X in enumerate(members):
        s = separation_of(M, X)
        if s is None or s.order != 2:
            raise NotA2Separation(i)
    union = 0
    for X in members:
        if union & X:
            raise FamilyNotDisjoint(f"{M.labels(X)} meets another member")
        union |= X
    if names is None:
        members.sort(key=subset_key)
        names = [virtual_label(i) for i in range(len(members))]
    else:
        paired = sorted(zip(members, names), key=lambda pair: subset_key(pair[0]))
        members = [X for X, _ in paired]
        names = [name for _, name in paired]
    local, real = local_matroid(M, members, names)
    logger.debug("localized %d elements at %d members: %d local circuits", M.size, len(members), len(local.circuits))
    return Localization(M, tuple(members), local, real)


def phi_U(L: Localization, Y: int) -> int:
    return _phi(L.real, L.family, Y)


def phi_U_inverse(L: Localization, Z: int) -> int:
    reals = list(bits(L.real))
    preimage = 0
    for j in bits(Z):
        if j < len(reals):
            preimage |= 1 << reals[j]
        else:
            preimage |= L.family[j - len(reals)]
    return preimage


def local_independents_correspond(L: Localization, I: int) -> int:
    M = L.base
    if not is_independent(M, I):
        raise DependentInput(f"{M.labels(I)} is dependent")
    image = _phi(L.real, (), I & L.real)
    for i, X in enumerate(L.family):
        if popcount(I & X) == M.rank_of(X):
            image |= 1 << L.virtual(i)
    return image


def local_bases(L: Localization) -> tuple[int, ...]:
    direct = bases(L.local)
    via_image = {local_independents_correspond(L, B) for B in bases(L.base)}
    if set(direct) != via_image:
        logger.error("local bases disagree with the image of the bases of M")
        raise LemmaFailure(
            "local bases",
            f"{len(direct)} direct bases against {len(via_image)} images",
        )
    return direct


def project_2sep(L: Localization, S_U: int) -> Separation | None:
    """The separation of M over S_U, present exactly when S_U is a 2-separation side of the local matroid."""
    if popcount(S_U) < 2 or popcount(L.local.complement(S_U)) < 2:
        raise PreconditionViolated("|S_U|, |S_U∁| >= 2")
    local_sep = separation_of(L.local, S_U)
    preimage = phi_U_inverse(L, S_U)
    base_sep = separation_of(L.base, preimage)
    local_is_2sep = local_sep is not None and local_sep.order == 2
    base_is_2sep = base_sep is not None and base_sep.order == 2
    if local_is_2sep != base_is_2sep:
        logger.error("2-separation correspondence fails on %s", L.local.labels(S_U))
        raise LemmaFailure(
            "2-separation correspondence",
            f"{L.local.labels(S_U)} local={local_is_2sep}, preimage {L.base.labels(preimage)} base={base_is_2sep}",
        )
    return base_sep if base_is_2sep else None


def lift_2sep_subset(L: Localization, S: Separation, S_U: int) -> Separation:
    M = L.base
    found = separation_of(M, S.side_a)
    if found is None or found.order != 2:
        raise PreconditionViolated("(S, S∁) is a 2-separation of M")
    if not is_subset(S_U, phi_U(L, S.side_a)):
        raise PreconditionViolated("S_U ⊆ φ_U(S)")
    if popcount(S_U) < 2 or popcount(L.local.complement(S_U)) < 2:
        raise PreconditionViolated("|S_U|, |S_U∁| >= 2")
    if phi(L.local, S_U) != 1:
        logger.error("lifted side %s is no 2-separation of the localization", L.local.labels(S_U))
        raise LemmaFailure("2-separation lift", f"phi_local({L.local.labels(S_U)}) = {phi(L.local, S_U)}")
    return Separation(S_U, L.local.complement(S_U), 2)


def goodness_corresponds(
    L: Localization,
    S_U: int,
    local_seps: Sequence[Separation] | None = None,
    base_seps: Sequence[Separation] | None = None,
) -> bool:
    local_sep = separation_of(L.local, S_U)
    if local_sep is None or local_sep.order != 2:
        raise PreconditionViolated("(S_U, S_U∁) is a 2-separation of the localization")
    if local_seps is None:
        local_seps = enumerate_2separations(L.local)
    if base_seps is None:
        base_seps = enumerate_2separations(L.base)
    preimage = phi_U_inverse(L, S_U)
    base_sep = Separation(preimage, L.base.complement(preimage), 2)
    local_good = is_good(L.local, local_sep, local_seps)
    base_good = is_good(L.base, base_sep, base_seps)
    if local_good != base_good:
        logger.error("goodness correspondence fails on %s", L.local.labels(S_U))
        raise LemmaFailure(
            "goodness correspondence",
            f"{L.local.labels(S_U)} good locally: {local_good}, in M: {base_good}",
        )
    return local_good


def restriction_commutes(L: Localization, A: int) -> bool:
    """Whether local|A equals the localization of M|φ⁻¹(A) at the members collapsed into A.

    Members X of that subfamily need ``|φ⁻¹(A) ∖ X| >= 2``.
    """
    preimage = phi_U_inverse(L, A)
    kept = [i for i in range(len(L.family)) if (A >> L.virtual(i)) & 1]
    for i in kept:
        if popcount(preimage & ~L.family[i]) < 2:
            raise PreconditionViolated("|φ⁻¹(A) ∖ X| >= 2", f"member {i} leaves too little behind")
    restricted = restriction(L.base, preimage)
    position = {old: new for new, old in enumerate(bits(preimage))}
    sub_family = [mask_of(position[j] for j in bits(L.family[i])) for i in kept]
    names = [L.local.ground[L.virtual(i)] for i in kept]
    localized, _ = local_matroid(restricted, sub_family, names)
    return localized == restriction(L.local, A)


def restriction_2sep(M: Matroid, s: Separation, X: int) -> Separation:
    """(S∩X, S∁∩X) as a separation of M|X of order at most 2."""
    inside, outside = s.side_a & X, s.side_b & X
    if popcount(inside) < 2 or popcount(outside) < 2:
        raise PreconditionViolated("|S∩X|, |S∁∩X| >= 2")
    restricted = restriction(M, X)
    position = {old: new for new, old in enumerate(bits(X))}
    side = mask_of(position[j] for j in bits(inside))
    value = phi(restricted, side)
    if value > 1:
        logger.error("restriction of a 2-separation to %s has phi %d", M.labels(X), value)
        raise LemmaFailure("restriction of a 2-separation", f"phi = {value} on {M.labels(inside)}")
    return Separation(side, restricted.complement(side), value + 1)


def two_sum(M1: Matroid, M2: Matroid, e: str) -> Matroid:
    shared = set(M1.ground) & set(M2.ground)
    if shared != {e}:
        raise BadSharedElement(f"ground sets share {sorted(shared)}, expected exactly {e!r}")
    i1, i2 = M1.index(e), M2.index(e)
    for M, i in ((M1, i1), (M2, i2)):
        if is_loop(M, i) or is_coloop(M, i):
            raise BadSharedElement(f"{e!r} is a loop or coloop")
    keep1 = M1.full & ~(1 << i1)
    keep2 = M2.full & ~(1 << i2)
    shift = M1.size - 1

    def drop(mask: int, i: int) -> int:
        low = mask & ((1 << i) - 1)
        return low | ((mask >> (i + 1)) << i)

    through1 = [drop(C & keep1, i1) for C in M1.circuits if (C >> i1) & 1]
    through2 = [drop(C & keep2, i2) << shift for C in M2.circuits if (C >> i2) & 1]
    circuits = [drop(C, i1) for C in M1.circuits if not (C >> i1) & 1]
    circuits += [drop(C, i2) << shift for C in M2.circuits if not (C >> i2) & 1]
    circuits += [a | b for a in through1 for b in through2]
    ground = M1.labels(keep1) + M2.labels(keep2)
    return from_masks(ground, circuits, ValidationLevel.ANTICHAIN)


def shared_label(M: Matroid, s: Separation) -> str:
    digest = hashlib.sha1(",".join(M.labels(s.key)).encode("utf-8")).hexdigest()
    return f"@s:{digest[:8]}"


def split_along(M: Matroid, s: Separation) -> tuple[Matroid, Matroid]:
    """The two parts of M glued at ``shared_label(M, s)``; M1 holds side_a."""
    found = separation_of(M, s.side_a)
    if found is None or found.order != 2:
        raise NotA2Separation(0, f"{M.labels(s.side_a)} is not a 2-separation side")
    e = shared_label(M, s)
    M1 = localize(M, [s.side_b], names=[e]).local
    M2 = localize(M, [s.side_a], names=[e]).local
    return M1, M2
