import pytest

from tdlc.catalog import catalog, catalog_names, cyclic_product, enumerate_endos
from tdlc.finite import (FiniteEndo, NotAHomomorphism, all_subgroups, closure, endo_from_map,
                         quotient)


@pytest.mark.parametrize("factors,count", [((1,), 1), ((2, 2), 5), ((2, 2, 2), 16), ((4,), 3),
                                           ((2, 4), 8)])
def test_subgroup_counts(factors, count):
    assert len(all_subgroups(cyclic_product(list(factors)))) == count


def test_subgroup_counts_nonabelian():
    assert len(all_subgroups(catalog("S3"))) == 6
    assert len(all_subgroups(catalog("Q8"))) == 6
    assert len(all_subgroups(catalog("D4"))) == 10


def test_closure_generates_cyclic_subgroup():
    g = cyclic_product([6])
    assert closure(g, [2]).order == 3
    assert closure(g, [2, 3]).order == 6


def test_endo_from_map_rejects_non_homomorphism():
    g = catalog("S3")
    involution = next(x for x in range(g.order) if g.element_order(x) == 2)
    rotation = next(x for x in range(g.order) if g.element_order(x) == 3)
    with pytest.raises(NotAHomomorphism):
        endo_from_map(g, [involution, rotation], [rotation, rotation])
    with pytest.raises(ValueError):
        endo_from_map(g, [involution], [])


def test_endo_count_small_groups():
    assert len(enumerate_endos(cyclic_product([2, 2]))) == 16
    assert len(enumerate_endos(catalog("S3"))) == 10


def test_power_and_then():
    g = cyclic_product([8])
    double = endo_from_map(g, [1], [2])
    assert double.power(3) == FiniteEndo.zero(g)
    assert double.then(double) == double.power(2)


def test_quotient_order():
    g = catalog("D4")
    centre = [s for s in all_subgroups(g) if s.order == 2
              and all(g.mul(x, y) == g.mul(y, x) for x in s.members for y in g.whole().members)]
    q, _ = quotient(g, centre[0])
    assert q.order == 4


def test_universe_operations():
    g = cyclic_product([2, 2])
    u = g.universe
    swap = endo_from_map(g, [g.labels.index((1, 0)), g.labels.index((0, 1))],
                         [g.labels.index((0, 1)), g.labels.index((1, 0))])
    first = closure(g, [g.labels.index((1, 0))])
    second = closure(g, [g.labels.index((0, 1))])
    assert u.equal(u.image(swap, first)[0], second)
    assert u.equal(u.preimage(swap, second, g.whole()), first)
    assert u.index(g.whole(), first) == 2
    assert u.equal(u.intersect(first, second), g.trivial())
    assert u.equal(u.join(first, second), g.whole())


def test_catalog_orders():
    names = catalog_names(12)
    assert all(catalog(n).order <= 12 for n in names)
    assert "A4" in names and "C16" not in names
