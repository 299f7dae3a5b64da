import numpy as np
import pytest

from tdlc.dense import DenseEndo
from tdlc.fixtures import load_fixture
from tdlc.seqvec import BandedEndo, EndoError, SeqVector, endo_compose, validate_endo

SHIFT = {"p": 2, "hi": 0,
         "up_tail": {"period": 1, "shift": 1, "templates": [[[1, 1]]]},
         "down_tail": {"period": 1, "shift": 1, "templates": [[[0, 1]]]}}


def test_vector_arithmetic_trims():
    a = SeqVector.from_terms(3, [[-2, 1], [4, 2]])
    b = SeqVector.from_terms(3, [[-2, 2]])
    s = a + b
    assert s.bottom == 4 and s.top == 4 and s[4] == 2
    assert (a - a).is_zero()
    assert a.shift(3).terms() == [(1, 1), (7, 2)]
    assert a.valuation() == -2
    assert SeqVector(2).valuation() == float("inf")


def test_shift_endo_moves_down():
    e = BandedEndo.from_json(SHIFT)
    validate_endo(e)
    for n in (-5, 0, 7):
        assert e.apply(SeqVector.unit(2, n)).terms() == [(n - 1, 1)]


def test_json_round_trip():
    e = BandedEndo.from_json(load_fixture("ex-3-11-p2")["endo"])
    again = BandedEndo.from_json(e.to_json())
    assert all(e.row(n) == again.row(n) for n in range(-10, 40))


def test_validate_rejects_unbounded_support():
    bad = dict(SHIFT, down_tail={"period": 1, "shift": 0, "templates": [[[0, 1]]]})
    with pytest.raises(EndoError) as info:
        validate_endo(BandedEndo.from_json(bad))
    assert "unbounded below" in str(info.value)


def test_validate_rejects_composite_prime():
    with pytest.raises(EndoError):
        validate_endo(BandedEndo.identity(4))


def test_validate_lists_every_problem():
    bad = {"p": 2, "lo": 3, "hi": 1, "down_tail": {"period": 2, "shift": 1,
                                                    "templates": [[[0, 1]]]}}
    with pytest.raises(EndoError) as info:
        validate_endo(BandedEndo.from_json(bad))
    assert len(info.value.problems) >= 2


@pytest.mark.parametrize("name", ["ex-3-11-p2", "ex-6-1", "mult-one-plus-t-inverse"])
def test_compose_matches_dense_product(name):
    e = BandedEndo.from_json(load_fixture(name)["endo"])
    sq = endo_compose(e, e)
    lo, hi = -8, 48
    d = DenseEndo(e, lo, hi)
    dense_sq = (d.matrix @ d.matrix) % e.p
    mine = DenseEndo(sq, lo, hi).matrix
    rows = [i for i in range(hi - lo) if d.reach[i] < hi and all(
        d.reach[j - lo] < hi for j in range(lo, hi) if d.matrix[i, j - lo])]
    rows = [i for i in rows if i < 16 - lo]
    assert len(rows) >= 16
    assert np.array_equal(dense_sq[rows], mine[rows])


def test_compose_with_identity():
    e = BandedEndo.from_json(SHIFT)
    one = BandedEndo.identity(2)
    assert all(endo_compose(e, one).row(n) == e.row(n) for n in range(-6, 12))
