import pytest

from app.errors import (
    BadSharedElement,
    Disconnected,
    FamilyNotDisjoint,
    LemmaFailure,
    NotA2Separation,
    PreconditionViolated,
)
from app.services.connectivity import Separation, separation_of
from app.services.fixtures import cycle
from app.services.localization import (
    goodness_corresponds,
    lift_2sep_subset,
    local_bases,
    local_independents_correspond,
    localize,
    phi_U,
    phi_U_inverse,
    project_2sep,
    restriction_2sep,
    restriction_commutes,
    shared_label,
    split_along,
    two_sum,
)
from app.services.matroid_kernel import (
    direct_sum,
    from_circuits,
    is_independent,
    mask_of,
    relabel,
    same_matroid,
    uniform,
)


@pytest.fixture
def local_k4e(k4e):
    return localize(k4e, [mask_of([0, 1])])


def test_localization_collapses_a_side(local_k4e):
    local = local_k4e.local
    assert local.ground == ("2", "3", "4", "@e0")
    assert local.circuit_labels() == [("2", "@e0"), ("2", "3", "4"), ("3", "4", "@e0")]
    assert local_k4e.virtual_names == ("@e0",)
    assert local_k4e.virtual(0) == 3


def test_family_is_sorted_before_naming(k4e):
    L = localize(k4e, [mask_of([3, 4]), mask_of([0, 1])])
    assert L.family == (mask_of([0, 1]), mask_of([3, 4]))
    assert L.local.ground == ("2", "@e0", "@e1")


def test_custom_names_follow_their_members(k4e):
    L = localize(k4e, [mask_of([3, 4]), mask_of([0, 1])], names=["x", "y"])
    assert L.virtual_names == ("y", "x")


def test_localize_rejects_bad_families(k4e):
    with pytest.raises(NotA2Separation) as exc:
        localize(k4e, [mask_of([0, 1]), mask_of([0, 2])])
    assert exc.value.index == 1
    with pytest.raises(FamilyNotDisjoint):
        localize(k4e, [mask_of([0, 1]), mask_of([0, 1, 2])])
    disconnected = direct_sum(uniform(1, 2), relabel(uniform(1, 2), {"e0": "f0", "e1": "f1"}))
    with pytest.raises(Disconnected):
        localize(disconnected, [])


def test_phi_U_and_its_inverse(local_k4e):
    assert phi_U(local_k4e, mask_of([0, 2])) == mask_of([0, 3])
    assert phi_U_inverse(local_k4e, mask_of([0, 3])) == mask_of([0, 1, 2])


def test_independent_sets_map_to_independent_sets(k4e, local_k4e):
    image = local_independents_correspond(local_k4e, mask_of([0, 1, 3]))
    assert image == mask_of([1, 3])
    assert is_independent(local_k4e.local, image)
    assert local_independents_correspond(local_k4e, mask_of([0, 3])) == mask_of([1])


def test_local_bases(local_k4e):
    assert len(local_bases(local_k4e)) == 5


def test_project_2sep(local_k4e):
    base_sep = project_2sep(local_k4e, mask_of([0, 3]))
    assert base_sep.side_a == mask_of([0, 1, 2])
    with pytest.raises(PreconditionViolated):
        project_2sep(local_k4e, mask_of([0]))


def test_goodness_corresponds(local_k4e):
    assert goodness_corresponds(local_k4e, mask_of([0, 3])) is True


def test_lift_of_a_separation_image(k4e, local_k4e):
    s = separation_of(k4e, mask_of([0, 1, 2]))
    lifted = lift_2sep_subset(local_k4e, s, mask_of([0, 3]))
    assert lifted == Separation(mask_of([0, 3]), mask_of([1, 2]), 2)


def test_lift_fails_for_a_proper_subset_of_the_image(k4e):
    L = localize(k4e, [mask_of([3, 4])])
    assert L.local.ground == ("0", "1", "2", "@e0")
    s = separation_of(k4e, mask_of([0, 1, 2]))
    with pytest.raises(LemmaFailure):
        lift_2sep_subset(L, s, mask_of([0, 2]))


def test_restriction_commutes_with_localization(local_k4e):
    assert restriction_commutes(local_k4e, local_k4e.local.full)
    assert restriction_commutes(local_k4e, mask_of([0, 1, 2]))


def test_restriction_of_a_2separation_can_drop_order():
    c6 = cycle(6)
    s = separation_of(c6, mask_of([0, 1, 2]))
    restricted = restriction_2sep(c6, s, mask_of([0, 1, 3, 4]))
    assert restricted.order == 1
    with pytest.raises(PreconditionViolated):
        restriction_2sep(c6, s, mask_of([0, 3, 4]))


def test_split_and_two_sum_round_trip(k4e):
    s = separation_of(k4e, mask_of([0, 1]))
    e = shared_label(k4e, s)
    assert e.startswith("@s:")
    M1, M2 = split_along(k4e, s)
    assert M1.ground == ("0", "1", e)
    assert M2.ground == ("2", "3", "4", e)
    assert same_matroid(two_sum(M1, M2, e), k4e)


def test_split_needs_a_2separation(k4e):
    with pytest.raises(NotA2Separation):
        split_along(k4e, Separation(mask_of([0, 2]), mask_of([1, 3, 4]), 2))


def test_two_sum_shared_element_errors():
    with pytest.raises(BadSharedElement):
        two_sum(uniform(2, 3), uniform(2, 3), "e0")
    looped = from_circuits(["a", "e"], [["e"]])
    with pytest.raises(BadSharedElement):
        two_sum(looped, relabel(uniform(1, 2), {"e0": "e", "e1": "b"}), "e")
