import pytest

from tdlc import engine as E
from tdlc.catalog import catalog, enumerate_endos
from tdlc.core import CapabilityError, InconclusiveError
from tdlc.finite import FiniteEndo, all_subgroups
from tdlc.fixtures import fixture_problem
from tdlc.properties import swap_case


@pytest.mark.parametrize("p", [2, 3])
def test_swap_is_tidy_for_the_square_only(p):
    g, swap, w = swap_case(p)
    assert E.displacement_index(swap, w) == p
    assert not E.check_tidy(swap, w).tidy
    assert E.check_tidy(swap.power(2), w).tidy
    assert E.scale(swap, w).scale == 1


def test_finite_scale_is_always_one():
    g = catalog("D4")
    for e in enumerate_endos(g)[:10]:
        for s in all_subgroups(g):
            assert E.scale(e, s).scale == 1


def test_tidying_procedure_ends_tidy_in_finite_groups():
    g = catalog("C2xC2xC2")
    for e in enumerate_endos(g)[::37]:
        for s in all_subgroups(g)[::3]:
            trace = E.tidying_procedure(e, s)
            assert trace.final_report.tidy
            assert trace.displacements[-1] == 1


def test_zero_endo_limits():
    g = catalog("C4")
    zero = FiniteEndo.zero(g)
    up, cert = E.u_plus(zero, g.whole())
    um, _ = E.u_minus(zero, g.whole())
    assert up.order == 1 and um.order == 4 and cert.kind == "exact"


def test_iterate_tidy_family_needs_finite_group():
    prob = fixture_problem("shift-t-inverse")
    with pytest.raises(CapabilityError):
        E.iterate_tidy_family(prob.alpha, prob.subgroups["U"], 2)
    with pytest.raises(CapabilityError):
        E.dynamics_subgroups(prob.alpha)


def test_short_horizon_is_inconclusive():
    prob = fixture_problem("ex-3-11-p2")
    with pytest.raises(InconclusiveError) as info:
        E.u_plus(prob.alpha, prob.subgroups["U"], horizon=1)
    assert info.value.certificate.kind == "inconclusive"


def test_ex_3_11_tidied_subgroup():
    prob = fixture_problem("ex-3-11-p2")
    trace = E.tidying_procedure(prob.alpha, prob.subgroups["U"])
    assert trace.n == 3
    assert [int(d) for d in trace.displacements] == [4, 2, 1]
    assert prob.universe.equal(trace.w, prob.subgroups["W"])
    assert trace.l_certificate.kind == "horizon"


def test_moller_needs_three_terms():
    prob = fixture_problem("shift-t-inverse")
    with pytest.raises(ValueError):
        E.moller_scale(prob.alpha, prob.subgroups["U"], 2)


def test_scale_on_power_series_seed():
    prob = fixture_problem("mult-one-plus-t-inverse")
    res = E.scale(prob.alpha, prob.default_subgroup())
    assert res.scale == 2 and res.certificate.ok
    assert E.check_tidy(prob.alpha, res.witness).tidy
