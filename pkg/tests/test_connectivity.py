import random

import pytest

from app.errors import DependentInput, PreconditionViolated
from app.services.connectivity import (
    Separation,
    del_,
    del_invariant,
    enumerate_2separations,
    enumerate_separations,
    is_n_connected,
    nested_limit,
    phi,
    phi_by_bases,
    separation_of,
)
from app.services.fixtures import cycle
from app.services.matroid_kernel import direct_sum, mask_of, relabel, uniform


def test_phi_matches_the_basis_route(k4e):
    for X in range(k4e.full + 1):
        assert phi(k4e, X) == phi_by_bases(k4e, X)


def test_k4_minus_edge_two_separations(k4e):
    seps = enumerate_2separations(k4e)
    assert [s.side_a for s in seps] == [mask_of([0, 1]), mask_of([0, 1, 2])]
    assert all(s.order == 2 for s in seps)
    assert separation_of(k4e, mask_of([0, 1])) == Separation(mask_of([0, 1]), mask_of([2, 3, 4]), 2)


def test_separation_of_needs_large_sides(k4e):
    assert phi(k4e, mask_of([2])) == 1
    assert separation_of(k4e, mask_of([2])) is None


def test_uniform_separations(u24):
    assert enumerate_2separations(u24) == []
    assert len(enumerate_2separations(uniform(3, 4))) == 3
    assert len(enumerate_2separations(uniform(1, 4))) == 3


def test_separation_key_and_orientation():
    s = Separation(mask_of([2, 3]), mask_of([0, 1]), 2)
    assert s.key == mask_of([0, 1])
    assert s.inverted().key == s.key
    assert s.oriented(mask_of([0, 1])) == s.inverted()
    assert s.oriented(mask_of([2, 3])) is s


def test_one_separations_of_a_direct_sum():
    M = direct_sum(uniform(1, 2), relabel(uniform(1, 2), {"e0": "f0", "e1": "f1"}))
    seps = enumerate_separations(M, 1)
    assert [M.labels(s.side_a) for s in seps] == [("e0", "e1")]
    assert not is_n_connected(M, 2)


def test_n_connectedness(k4e, u24):
    assert is_n_connected(u24, 3)
    assert is_n_connected(k4e, 2)
    assert not is_n_connected(k4e, 3)


def test_del_counts_dropped_elements(k4e):
    assert del_(k4e, mask_of([0, 1]), mask_of([2, 3])) == 1
    assert del_(k4e, mask_of([0, 1]), mask_of([3, 4])) == 1
    assert del_(k4e, mask_of([0]), mask_of([3])) == 0
    with pytest.raises(DependentInput):
        del_(k4e, mask_of([0, 1, 2]), 0)


def test_del_does_not_depend_on_bases(k4e):
    rng = random.Random(0)
    assert del_invariant(k4e, mask_of([0, 1]), 20, rng) == {1}
    assert del_invariant(k4e, mask_of([0, 2]), 20, rng) == {2}


def test_nested_limit_of_a_chain():
    c6 = cycle(6)
    limit = nested_limit(c6, [mask_of([0, 1, 2, 3]), mask_of([0, 1, 2])], 2)
    assert limit.side_a == mask_of([0, 1, 2])
    assert limit.order == 2


def test_nested_limit_preconditions(k4e):
    with pytest.raises(PreconditionViolated):
        nested_limit(k4e, [], 2)
    with pytest.raises(PreconditionViolated):
        nested_limit(k4e, [mask_of([0, 1]), mask_of([3, 4])], 2)
    with pytest.raises(PreconditionViolated):
        nested_limit(k4e, [mask_of([0, 2])], 2)
