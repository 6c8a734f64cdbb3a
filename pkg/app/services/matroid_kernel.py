"""Finite matroids stored as an explicit, canonically ordered circuit family.

Subsets of a ground set are ``int`` bitmasks over the ground-set indices and
elements are indices; ``Matroid.subset`` / ``Matroid.labels`` convert from and
to the external string labels.
"""
import logging
import random
import threading
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Callable, Iterable, Iterator, Sequence

import networkx as nx
import numpy as np

from app.config import settings
from app.errors import (
    AxiomViolation,
    DependentInput,
    DuplicateElement,
    GroundSetTooLarge,
    InvalidMatrix,
    InvalidParams,
    LemmaFailure,
    NotDependent,
    PreconditionViolated,
    UnknownVertex,
)

logger = logging.getLogger(__name__)


class ValidationLevel(str, Enum):
    NONE = "none"
    ANTICHAIN = "antichain"
    FULL = "full"


def bits(mask: int) -> Iterator[int]:
    """Yield the indices set in ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def subset_key(mask: int) -> tuple:
    """Canonical subset order: by size, then lexicographically by index."""
    return (popcount(mask), tuple(bits(mask)))


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


@dataclass(frozen=True, repr=False)
class Matroid:
    ground: tuple[str, ...]
    circuits: tuple[int, ...]
    _ranks: dict = field(default_factory=dict, compare=False, hash=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, compare=False, hash=False)

    def __repr__(self):
        return f"Matroid(ground={list(self.ground)}, circuits={self.circuit_labels()})"

    @property
    def size(self) -> int:
        return len(self.ground)

    @property
    def full(self) -> int:
        return (1 << len(self.ground)) - 1

    def index(self, label: str) -> int:
        try:
            return self.ground.index(label)
        except ValueError:
            raise InvalidParams(f"unknown element {label!r}")

    def subset(self, labels: Iterable[str]) -> int:
        return mask_of(self.index(label) for label in labels)

    def labels(self, mask: int) -> tuple[str, ...]:
        return tuple(self.ground[i] for i in bits(mask))

    def complement(self, mask: int) -> int:
        return self.full & ~mask

    def circuit_labels(self) -> list[tuple[str, ...]]:
        return [self.labels(c) for c in self.circuits]

    def rank_of(self, mask: int) -> int:
        cached = self._ranks.get(mask)
        if cached is not None:
            return cached
        value = popcount(_greedy(self, 0, mask, bits(mask)))
        with self._lock:
            self._ranks[mask] = value
        return value


def check_cap(M: Matroid, operation: str) -> None:
    if M.size > settings.GROUND_SET_CAP:
        raise GroundSetTooLarge(
            f"{operation} enumerates subsets of {M.size} elements; cap is {settings.GROUND_SET_CAP}"
        )


def _validate(ground: tuple[str, ...], circuits: tuple[int, ...], level: ValidationLevel) -> None:
    def named(*masks):
        return [tuple(ground[i] for i in bits(m)) for m in masks]

    if level == ValidationLevel.NONE:
        return
    if circuits and circuits[0] == 0:
        raise AxiomViolation("C1", [()], "the empty set is a circuit")
    for a, b in combinations(circuits, 2):
        if is_subset(a, b):
            raise AxiomViolation("C2", named(a, b))
    if level != ValidationLevel.FULL:
        return
    for a, b in combinations(circuits, 2):
        for x in bits(a & b):
            union = (a | b) & ~(1 << x)
            if not any(is_subset(c, union) for c in circuits):
                raise AxiomViolation("C3", named(a, b), f"no circuit inside the union of {named(a, b)} minus {ground[x]!r}")


def from_masks(ground: Sequence[str], masks: Iterable[int], validate: ValidationLevel) -> Matroid:
    ground = tuple(ground)
    if len(set(ground)) != len(ground):
        seen = [label for i, label in enumerate(ground) if label in ground[:i]]
        raise DuplicateElement(f"duplicate elements {seen}")
    circuits = tuple(sorted(set(masks), key=subset_key))
    _validate(ground, circuits, ValidationLevel(validate))
    return Matroid(ground, circuits)


def _minimal_dependent(n: int, dependent: Callable[[int], bool]) -> list[int]:
    """Minimal subsets of ``range(n)`` satisfying ``dependent`` (upward closed)."""
    found = []
    for k in range(1, n + 1):
        for combo in combinations(range(n), k):
            mask = mask_of(combo)
            if any(is_subset(c, mask) for c in found):
                continue
            if dependent(mask):
                found.append(mask)
    return found


def from_circuits(ground: Sequence[str], circuits: Iterable[Iterable[str]], validate: ValidationLevel | str | None = None) -> Matroid:
    ground = tuple(ground)
    lookup = {label: i for i, label in enumerate(ground)}
    masks = []
    for circuit in circuits:
        circuit = list(circuit)
        missing = [label for label in circuit if label not in lookup]
        if missing:
            raise InvalidParams(f"circuit {circuit} uses elements {missing} outside the ground set")
        masks.append(mask_of(lookup[label] for label in circuit))
    return from_masks(ground, masks, validate or settings.LIBRARY_VALIDATION)


def uniform(r: int, n: int) -> Matroid:
    if n < 0 or r < 0 or r > n:
        raise InvalidParams(f"uniform matroid needs 0 <= r <= n, got r={r}, n={n}")
    if n > settings.GROUND_SET_CAP:
        raise GroundSetTooLarge(f"uniform matroid on {n} elements exceeds cap {settings.GROUND_SET_CAP}")
    ground = tuple(f"e{i}" for i in range(n))
    # equal-size family, trivially an antichain
    return from_masks(ground, (mask_of(c) for c in combinations(range(n), r + 1)), ValidationLevel.NONE)


def graphic(vertices: Sequence, edges: Sequence[tuple], labels: Sequence[str] | None = None) -> Matroid:
    known = set(vertices)
    for u, v in edges:
        for endpoint in (u, v):
            if endpoint not in known:
                raise UnknownVertex(f"edge ({u}, {v}) uses unknown vertex {endpoint!r}")
    labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(len(edges)))
    if len(labels) != len(edges):
        raise InvalidParams("one label per edge is required")
    if len(edges) > settings.GROUND_SET_CAP:
        raise GroundSetTooLarge(f"graphic matroid with {len(edges)} edges exceeds cap {settings.GROUND_SET_CAP}")

    def contains_cycle(mask: int) -> bool:
        graph = nx.MultiGraph()
        for i in bits(mask):
            graph.add_edge(*edges[i])
        return not nx.is_forest(graph)

    return from_masks(labels, _minimal_dependent(len(edges), contains_cycle), ValidationLevel.ANTICHAIN)


def _gf2_rank(matrix: np.ndarray) -> int:
    m = matrix.copy() % 2
    rows, cols = m.shape
    rank = 0
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if m[r, col]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(rows):
            if r != rank and m[r, col]:
                m[r] ^= m[rank]
        rank += 1
    return rank


def linear_gf2(columns: Sequence[Sequence[int]], labels: Sequence[str] | None = None) -> Matroid:
    lengths = {len(col) for col in columns}
    if len(lengths) > 1:
        raise InvalidMatrix(f"columns have differing lengths {sorted(lengths)}")
    if any(bit not in (0, 1) for col in columns for bit in col):
        raise InvalidMatrix("entries must be 0 or 1")
    labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(len(columns)))
    if len(labels) != len(columns):
        raise InvalidParams("one label per column is required")
    if len(columns) > settings.GROUND_SET_CAP:
        raise GroundSetTooLarge(f"{len(columns)} columns exceed cap {settings.GROUND_SET_CAP}")
    height = lengths.pop() if lengths else 0
    matrix = np.array(columns, dtype=np.uint8).reshape(len(columns), height).T

    def dependent(mask: int) -> bool:
        picked = list(bits(mask))
        return _gf2_rank(matrix[:, picked]) < len(picked)

    return from_masks(labels, _minimal_dependent(len(columns), dependent), ValidationLevel.ANTICHAIN)


def is_independent(M: Matroid, S: int) -> bool:
    return all(c & ~S for c in M.circuits)


def _greedy(M: Matroid, start: int, S: int, order: Iterable[int]) -> int:
    basis = start
    for i in order:
        if not (S >> i) & 1 or (basis >> i) & 1:
            continue
        candidate = basis | (1 << i)
        if is_independent(M, candidate):
            basis = candidate
    return basis


def extend_to_maximal_independent(M: Matroid, I: int, S: int, order: Iterable[int] | None = None) -> int:
    """Greedy extension of ``I`` inside ``S``; ground order unless ``order`` is given."""
    if not is_subset(I, S):
        raise PreconditionViolated("I ⊆ S", "the independent set must lie inside S")
    if not is_independent(M, I):
        raise DependentInput(f"{M.labels(I)} is dependent")
    return _greedy(M, I, S, order if order is not None else bits(S))


def random_basis(M: Matroid, S: int, rng: random.Random) -> int:
    order = list(bits(S))
    rng.shuffle(order)
    return _greedy(M, 0, S, order)


def rank(M: Matroid, S: int) -> int:
    return M.rank_of(S)


def fundamental_circuit(M: Matroid, e: int, B: int) -> int:
    if (B >> e) & 1:
        raise PreconditionViolated("e ∉ B", f"{M.ground[e]!r} lies in B")
    if not is_independent(M, B):
        raise DependentInput(f"{M.labels(B)} is dependent")
    span = B | (1 << e)
    if is_independent(M, span):
        raise NotDependent(f"{M.labels(span)} is independent")
    found = [c for c in M.circuits if (c >> e) & 1 and is_subset(c, span)]
    if len(found) != 1:
        raise LemmaFailure("fundamental circuit", f"{len(found)} circuits through {M.ground[e]!r} inside {M.labels(span)}")
    return found[0]


def bases(M: Matroid) -> tuple[int, ...]:
    check_cap(M, "bases")
    r = M.rank_of(M.full)
    return tuple(mask_of(c) for c in combinations(range(M.size), r) if is_independent(M, mask_of(c)))


def dual(M: Matroid) -> Matroid:
    """Cocircuits: minimal sets meeting every basis, i.e. with non-spanning complement."""
    check_cap(M, "dual")
    r = M.rank_of(M.full)
    cocircuits = _minimal_dependent(M.size, lambda D: M.rank_of(M.full & ~D) < r)
    return from_masks(M.ground, cocircuits, ValidationLevel.ANTICHAIN)


def cocircuits(M: Matroid) -> tuple[int, ...]:
    return dual(M).circuits


def _index_map(M: Matroid, S: int) -> dict[int, int]:
    return {old: new for new, old in enumerate(bits(S))}


def _remap(mask: int, index_map: dict[int, int]) -> int:
    return mask_of(index_map[i] for i in bits(mask))


def restriction(M: Matroid, S: int) -> Matroid:
    index_map = _index_map(M, S)
    kept = (_remap(c, index_map) for c in M.circuits if is_subset(c, S))
    return from_masks(M.labels(S), kept, ValidationLevel.ANTICHAIN)


def deletion(M: Matroid, S: int) -> Matroid:
    return restriction(M, M.complement(S))


def contraction(M: Matroid, S: int) -> Matroid:
    return dual(restriction(dual(M), M.complement(S)))


def is_connected(M: Matroid) -> bool:
    if M.size <= 1:
        return True
    covered = set()
    for c in M.circuits:
        covered.update(combinations(bits(c), 2))
    return len(covered) == M.size * (M.size - 1) // 2


def is_loop(M: Matroid, e: int) -> bool:
    return (1 << e) in M.circuits


def is_coloop(M: Matroid, e: int) -> bool:
    return not any((c >> e) & 1 for c in M.circuits)


def direct_sum(M1: Matroid, M2: Matroid) -> Matroid:
    shift = M1.size
    circuits = list(M1.circuits) + [c << shift for c in M2.circuits]
    return from_masks(M1.ground + M2.ground, circuits, ValidationLevel.ANTICHAIN)


def relabel(M: Matroid, mapping: dict[str, str]) -> Matroid:
    ground = tuple(mapping.get(label, label) for label in M.ground)
    return from_masks(ground, M.circuits, ValidationLevel.NONE)


def reorder(M: Matroid, ground: Sequence[str]) -> Matroid:
    """The same matroid with its ground set listed in the order ``ground``."""
    if sorted(ground) != sorted(M.ground):
        raise InvalidParams("reorder needs a permutation of the ground set")
    position = {label: i for i, label in enumerate(ground)}
    index_map = {old: position[label] for old, label in enumerate(M.ground)}
    return from_masks(ground, (_remap(c, index_map) for c in M.circuits), ValidationLevel.NONE)


def same_matroid(M1: Matroid, M2: Matroid) -> bool:
    """Equality of circuit families as sets of labels, whatever the ground order."""
    if set(M1.ground) != set(M2.ground) or len(M1.ground) != len(M2.ground):
        return False
    return reorder(M2, M1.ground) == M1
