import pytest

from tdlc.fixtures import fixture_problem
from tdlc.orbits import escape_start, in_image_power, orbit_valuations
from tdlc.seqvec import BandedEndo, SeqVector

INF = float("inf")


@pytest.mark.parametrize("vals,k0", [
    ([0, 1, 2, 3], 0),
    ([3, 1, 2, 5], 1),
    ([2, 4, INF, INF], 0),
    ([1, 1, 1], None),
    ([0, 2, 1], None),
])
def test_escape_start(vals, k0):
    assert escape_start(vals) == k0


def test_orbit_valuations_of_zero_endo():
    e = BandedEndo.zero(2)
    assert orbit_valuations(e, SeqVector.unit(2, 3), 2) == [3, INF, INF]


def test_shift_is_surjective():
    a = fixture_problem("shift-t-inverse").alpha
    x = SeqVector.from_terms(2, [[-3, 1], [5, 1]])
    f = in_image_power(a, x, 4)
    assert f is not None and f.terms() == [(1, 1), (9, 1)]


def test_zero_endo_has_no_preimage():
    assert in_image_power(BandedEndo.zero(2), SeqVector.unit(2, 0), 1) is None


def test_ex_8_5_rows():
    a = fixture_problem("ex-8-5").alpha
    # row n reads f_{2n-2} for n <= 0, f_{-n} for odd n > 0 and f_{n/2} for even n
    for n, src in [(-3, -8), (0, -2), (1, -1), (5, -5), (2, 1), (8, 4)]:
        assert a.row(n).terms() == [(src, 1)]
    vals = orbit_valuations(a, SeqVector.unit(2, 3), 5)
    assert escape_start(vals) == 0
