import pytest

from tdlc.core import Index
from tdlc.fixtures import fixture_problem
from tdlc.laurent import (EPCSubgroup, LaurentUniverse, ep_equal, ep_index, ep_intersect, ep_join,
                          ep_le, ep_member, power_series, state_bound)
from tdlc.laurent import from_constraints
from tdlc.seqvec import SeqVector


def vec(*terms, p=2):
    return SeqVector.from_terms(p, [[n, 1] for n in terms])


def test_power_series_indices():
    assert ep_index(power_series(2, 0), power_series(2, 3)) == Index.power(2, 3)
    assert ep_index(power_series(3, -1), power_series(3, 1)) == 9
    assert ep_le(power_series(2, 2), power_series(2, 0))
    assert not ep_le(power_series(2, 0), power_series(2, 2))


def test_normal_form_is_canonical():
    # g0 + g1 = 0 and g1 = 0 describe the same subgroup as g0 = 0 and g1 = 0
    a = from_constraints(2, 0, [vec(0, 1), vec(1)])
    b = from_constraints(2, 0, [vec(0), vec(1)])
    assert a == b
    assert ep_equal(a, power_series(2, 2))


def test_periodic_family_round_trip():
    evens = from_constraints(2, 0, [], (0, 2, [vec(0), None]))
    assert not evens.is_open
    assert EPCSubgroup.from_json(evens.to_json()) == evens
    assert ep_member(vec(1, 3, 5), evens)
    assert not ep_member(vec(1, 4), evens)


def test_intersect_and_join():
    u = LaurentUniverse(2)
    a = from_constraints(2, 0, [vec(0)])
    b = from_constraints(2, 0, [vec(1)])
    assert u.equal(ep_intersect(a, b), power_series(2, 2))
    assert u.equal(ep_join(a, b), power_series(2, 0))
    assert ep_index(power_series(2, 0), ep_intersect(a, b)) == 4


def test_constraint_below_base_rejected():
    with pytest.raises(ValueError):
        from_constraints(2, 0, [vec(-1)])


def test_trivial_subgroup():
    e = EPCSubgroup.trivial(3)
    assert e.is_trivial
    assert ep_le(e, power_series(3, 5))
    assert not ep_member(vec(9, p=3), e)


def test_image_and_preimage_of_shift():
    prob = fixture_problem("shift-t-inverse")
    u, a = prob.universe, prob.alpha
    o = power_series(2, 0)
    img, cert = u.image(a, o)
    assert cert.ok and u.equal(img, power_series(2, -1))
    assert u.equal(u.preimage(a, o, o), power_series(2, 1))


def test_state_bound_limits_windows():
    with pytest.raises(ValueError):
        with state_bound(4):
            pass
    with state_bound(64):
        assert LaurentUniverse(2).state_bound == 64
    assert LaurentUniverse(2).state_bound == 4096
