from itertools import combinations

import pytest

from app.errors import (
    Disconnected,
    GroundSetMismatch,
    NotACircuit,
    NotCrossing,
    PreconditionViolated,
    QuadrantTooSmall,
)
from app.services.connectivity import Separation, enumerate_2separations, separation_of
from app.services.fixtures import cycle
from app.services.matroid_kernel import direct_sum, mask_of, relabel, uniform
from app.services.separation_calculus import (
    are_nested,
    corner,
    crosses_circuit,
    good_2separations,
    infinite_switch,
    is_good,
    nested_by_containment,
    quadrants,
    switch_circuits,
    symmetric_difference_sep,
)


@pytest.fixture
def c6():
    return cycle(6)


def test_quadrants_of_crossing_separations(c6):
    s1 = separation_of(c6, mask_of([0, 1, 2]))
    s2 = separation_of(c6, mask_of([0, 1, 3]))
    q = quadrants(s1, s2)
    assert q.parts() == (mask_of([0, 1]), mask_of([2]), mask_of([3]), mask_of([4, 5]))
    assert not are_nested(s1, s2)


def test_quadrants_need_one_ground_set():
    with pytest.raises(GroundSetMismatch):
        quadrants(Separation(0b01, 0b10, 1), Separation(0b001, 0b110, 1))


def test_nestedness_formulations_agree(c6):
    seps = enumerate_2separations(c6)
    for s, t in combinations(seps, 2):
        for a in (s, s.inverted()):
            assert are_nested(a, t) == nested_by_containment(a, t)


def test_corner_and_symmetric_difference(c6):
    s1 = separation_of(c6, mask_of([0, 1, 2]))
    s2 = separation_of(c6, mask_of([0, 1, 3]))
    assert corner(c6, s1, s2).side_a == mask_of([0, 1])
    assert symmetric_difference_sep(c6, s1, s2).side_a == mask_of([2, 3])


def test_corner_needs_crossing_separations(c6):
    s1 = separation_of(c6, mask_of([0, 1, 2]))
    inner = separation_of(c6, mask_of([0, 1]))
    with pytest.raises(NotCrossing):
        corner(c6, s1, inner)


def test_corner_with_small_quadrant():
    M = uniform(3, 4)
    s1 = separation_of(M, mask_of([0, 1]))
    s2 = separation_of(M, mask_of([0, 2]))
    with pytest.raises(QuadrantTooSmall):
        corner(M, s1, s2)


def test_corner_needs_two_separations(k4e):
    s = separation_of(k4e, mask_of([0, 1]))
    fake = Separation(mask_of([0, 2]), mask_of([1, 3, 4]), 2)
    assert not are_nested(s, fake)
    with pytest.raises(PreconditionViolated):
        corner(k4e, s, fake)


def test_good_separations(k4e):
    assert good_2separations(uniform(3, 4)) == []
    assert good_2separations(uniform(1, 4)) == []
    assert len(good_2separations(k4e)) == 2


def test_good_separations_need_connectivity():
    M = direct_sum(uniform(1, 2), relabel(uniform(1, 2), {"e0": "f0", "e1": "f1"}))
    with pytest.raises(Disconnected):
        good_2separations(M)


def test_switching(k4e):
    s = separation_of(k4e, mask_of([0, 1]))
    triangle, square = mask_of([0, 1, 2]), mask_of([0, 1, 3, 4])
    assert switch_circuits(k4e, triangle, square, s) == square
    assert switch_circuits(k4e, square, triangle, s) == triangle


def test_switching_errors(k4e):
    s = separation_of(k4e, mask_of([0, 1]))
    with pytest.raises(NotACircuit):
        switch_circuits(k4e, mask_of([0, 1]), mask_of([0, 1, 2]), s)
    with pytest.raises(NotCrossing):
        switch_circuits(k4e, mask_of([2, 3, 4]), mask_of([0, 1, 2]), s)


def test_infinite_switch_on_a_family(k4e):
    triangle, square = mask_of([0, 1, 2]), mask_of([0, 1, 3, 4])
    assert infinite_switch(k4e, triangle, square, [mask_of([0, 1])]) == square


def test_infinite_switch_needs_disjoint_members(k4e):
    triangle, square = mask_of([0, 1, 2]), mask_of([0, 1, 3, 4])
    with pytest.raises(PreconditionViolated) as exc:
        infinite_switch(k4e, triangle, square, [mask_of([0, 1]), mask_of([0, 1, 2])])
    assert exc.value.condition == "pairwise disjoint"


def test_crossing_circuits(k4e):
    s = separation_of(k4e, mask_of([0, 1]))
    assert crosses_circuit(mask_of([0, 1, 2]), s)
    assert not crosses_circuit(mask_of([2, 3, 4]), s)


def test_goodness_against_all_separations(k4e):
    seps = enumerate_2separations(k4e)
    assert all(is_good(k4e, s, seps) for s in seps)
    c4 = cycle(4)
    c4_seps = enumerate_2separations(c4)
    assert not any(is_good(c4, s, c4_seps) for s in c4_seps)


def test_infinite_switch_needs_crossing_circuits(k4e):
    triangle, square = mask_of([0, 1, 2]), mask_of([0, 1, 3, 4])
    with pytest.raises(PreconditionViolated) as exc:
        infinite_switch(k4e, triangle, square, [mask_of([3, 4])])
    assert exc.value.condition == "(1) circuits cross every member"


def test_infinite_switch_needs_c2_outside_the_union(k4e):
    triangle, square = mask_of([0, 1, 2]), mask_of([0, 1, 3, 4])
    with pytest.raises(PreconditionViolated) as exc:
        infinite_switch(k4e, square, triangle, [mask_of([0, 1, 2])])
    assert exc.value.condition == "(2) C2 meets the complement of the union if C1 does"


def test_infinite_switch_on_the_empty_family_returns_c2(k4e):
    triangle, square = mask_of([0, 1, 2]), mask_of([0, 1, 3, 4])
    assert infinite_switch(k4e, triangle, square, []) == square
    assert infinite_switch(k4e, square, triangle, []) == triangle
