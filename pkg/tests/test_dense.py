import pytest

from tdlc.dense import DenseEndo, DenseSubgroup, agree, dense_index
from tdlc.fixtures import fixture_problem, load_fixture
from tdlc.seqvec import BandedEndo


def test_low_reach_guard_refuses_images():
    # multiplication by t^-1 reads coordinate lo from the row below the window
    e = BandedEndo.from_json(load_fixture("shift-t-inverse")["endo"])
    d = DenseEndo(e, 0, 40)
    whole = DenseSubgroup.whole(2, 0, 40, 0)
    with pytest.raises(ValueError, match="window too small"):
        d.image(whole)
    with pytest.raises(ValueError, match="window too small"):
        d.preimage(whole, whole)


def test_image_agrees_with_normal_form():
    prob = fixture_problem("ex-3-11-p2")
    doc = load_fixture("ex-3-11-p2")
    d = DenseEndo(prob.alpha, 0, 120)
    u_dense = DenseSubgroup.from_description(dict(doc["subgroups"]["U"], p=2), 0, 120)
    img = prob.universe.image(prob.alpha, prob.subgroups["U"])[0]
    assert agree(img, d.image(u_dense), 32)
    assert agree(prob.subgroups["aU"], d.image(u_dense), 32)


def test_dense_index_of_power_series():
    a = DenseSubgroup.whole(3, 0, 20, 0)
    b = DenseSubgroup.whole(3, 0, 20, 2)
    assert dense_index(a, b, 16) == 2
