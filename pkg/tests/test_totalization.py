from __future__ import annotations

import itertools
import random

import pytest

from conftest import make_category
from theta2def.cochain import identity_data
from theta2def.theta2 import TwoTree, enumerate_trees
from theta2def.totalization import (
    build_reltot,
    build_tot,
    cohomology,
    cohomology_dims,
    commutativity_check,
    compare_normalized,
    cosimplicial_check,
    dy_complex,
    dy_row0_kernel,
    modification_kernel,
    modification_solutions,
    monoid_product,
    normalized_tot,
    transitivity_check,
    unit_element,
)
from theta2def.deform import group_cohomology_oracle
from theta2def.exactfield import GF
from theta2def.moncat import cyclic_group_table, vec_g_omega

T = lambda *hs: TwoTree(hs)


def _data(name):
    return identity_data(make_category(name))


def test_deloop_k_component_dims_count_trees():
    tot = build_tot(_data("k"), 3)
    assert tot.dims() == [len(enumerate_trees(l)) for l in range(4)]


@pytest.mark.parametrize("name", ["z2", "k"])
def test_h0_is_one(name):
    tot = build_tot(_data(name), 2)
    dim, reps = cohomology(tot, 0)
    assert dim == 1 and len(reps) == 1


def test_h0_contains_identity_modification():
    data = _data("dual")
    K = modification_kernel(data)
    assert K.contains(list(data.D.id(data.D.unit).vec))


def test_cohomology_degree_out_of_range():
    tot = build_tot(_data("k"), 2)
    with pytest.raises(ValueError):
        cohomology(tot, 2)


@pytest.mark.parametrize(
    "name,dims",
    [
        ("z2", [1, 0, 0, 0]),
        ("z2w", [1, 0, 0, 0]),
        ("z2f2", [1, 1, 1, 1]),
        ("k", [1, 0, 0, 0]),
        ("dual", [2, 0, 1, 1]),
    ],
)
def test_cohomology_dims(name, dims):
    assert cohomology_dims(build_tot(_data(name), 4)) == dims


def test_vec_group_h3_matches_group_cohomology():
    # for Vec_G with trivial omega, H^3 of the totalization equals H^3(G; k)
    for n, p in ((2, 2), (3, 3), (3, 2)):
        C = vec_g_omega(cyclic_group_table(n), field=GF(p))
        h = cohomology_dims(build_tot(identity_data(C), 4))
        assert h[3] == group_cohomology_oracle(cyclic_group_table(n), GF(p))[3]


@pytest.mark.parametrize("name", ["k", "dual", "z2f2"])
def test_normalized_quasi_isomorphism(name):
    rep = compare_normalized(_data(name), 3)
    assert rep["agree"]
    assert rep["full_dims"][0] == rep["normalized_dims"][0]


def test_normalized_strictly_smaller_for_deloop_k():
    full, norm = build_tot(_data("k"), 4).dims(), normalized_tot(_data("k"), 4).dims()
    assert all(n < f for f, n in zip(full[2:], norm[2:]))


@pytest.mark.parametrize("name", ["z2", "z2w", "dual"])
def test_modification_kernel_matches_solutions(name):
    data = _data(name)
    assert modification_kernel(data).equals(modification_solutions(data))


def test_dy_constructions_agree():
    data = _data("z2f2")
    a, b = dy_complex(data, 3), dy_row0_kernel(data, 3)
    assert all(u.equals(v) for u, v in zip(a.spaces, b.spaces))
    assert a.cohomology_dims() == [1, 1, 1]


def test_reltot_cosimplicial_identities():
    rep = cosimplicial_check(build_reltot(_data("z2w"), 2, 2))
    assert rep.checked > 0 and not rep.failures


@pytest.mark.parametrize("name", ["k", "z2w"])
def test_transitivity(name):
    rep = transitivity_check(_data(name), 4)
    assert rep.checked > 0 and not rep.failures


def _random_element(data, tree, rng):
    K = data.field
    return tree, [K.random(rng) for _ in range(data.component(tree).hat_dim)]


@pytest.mark.parametrize("name", ["dual", "z2w"])
def test_monoid_product_associative_and_unital(name):
    data = _data(name)
    rng = random.Random(2)
    for n in (1, 2):
        shapes = [TwoTree(h) for h in itertools.product(range(2), repeat=n)]
        e = unit_element(data, n)
        for _ in range(6):
            a, b, c = (_random_element(data, rng.choice(shapes), rng) for _ in range(3))
            assert monoid_product(data, monoid_product(data, a, b), c) == monoid_product(
                data, a, monoid_product(data, b, c)
            )
            assert monoid_product(data, e, a) == a and monoid_product(data, a, e) == a
            assert monoid_product(data, a, b)[0].heights == tuple(x + y for x, y in zip(a[0].heights, b[0].heights))


def test_one_commutativity():
    rep = commutativity_check(_data("z2"), lk_bound=1, m_bound=2)
    assert rep.pairs > 0 and rep.passed

