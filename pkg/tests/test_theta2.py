from __future__ import annotations

import itertools
import random
from math import comb

import pytest

from theta2def.theta2 import (
    DeltaMap,
    Shuffle,
    Theta2Error,
    TwoTree,
    all_maps,
    all_shuffles,
    boundary_squared,
    boundary_terms,
    compose,
    d_max,
    d_min,
    delta_codegeneracy,
    delta_coface,
    delta_compose,
    delta_identity,
    enumerate_trees,
    horizontal_codeg,
    identity,
    is_minus,
    is_plus,
    linking_number,
    reedy_factor,
    relation_instances,
    shuffle_coface,
    vertical_codeg,
    vertical_coface,
)


def T(*hs):
    return TwoTree(hs)


def test_dimension():
    assert T().dim == 0
    assert T(1, 0).dim == 3
    assert T(0, 0, 0).dim == 3


def test_enumerate_small_degrees():
    assert enumerate_trees(0) == [T()]
    assert enumerate_trees(2) == [T(1), T(0, 0)]
    assert enumerate_trees(3) == [T(2), T(0, 1), T(1, 0), T(0, 0, 0)]


@pytest.mark.parametrize("d", range(1, 9))
def test_enumerate_counts(d):
    # weak compositions of d - k into k parts, summed over k, give 2^(d-1)
    trees = enumerate_trees(d)
    assert len(trees) == 2 ** (d - 1)
    assert len(set(trees)) == len(trees)
    assert all(t.dim == d for t in trees)


def test_negative_height_rejected():
    with pytest.raises(Theta2Error):
        TwoTree((1, -1))


@pytest.mark.parametrize("n", range(0, 4))
def test_delta_simplicial_identities(n):
    for i in range(n + 2):
        for j in range(i + 1, n + 3):
            # d^j d^i = d^i d^(j-1)
            assert delta_compose(delta_coface(n + 1, j), delta_coface(n, i)) == delta_compose(
                delta_coface(n + 1, i), delta_coface(n, j - 1)
            )
    for j in range(n + 1):
        for i in range(n + 2):
            lhs = delta_compose(delta_codegeneracy(n + 1, j), delta_coface(n, i))
            if i in (j, j + 1):
                assert lhs == delta_identity(n)


def test_delta_map_validation():
    with pytest.raises(Theta2Error):
        DeltaMap(1, 1, [1, 0])
    with pytest.raises(Theta2Error):
        delta_coface(1, 3)


def test_shuffles():
    assert len(all_shuffles(2, 3)) == comb(5, 2)
    assert Shuffle("RL").sign_exponent == 1
    assert Shuffle("LR").sign_exponent == 0
    p, q = Shuffle("LR").dual_pair()
    assert p.values == (0, 1, 1) and q.values == (0, 0, 1)


def test_generator_shapes():
    f = d_min(T(0))
    assert f.source == T(0) and f.target == T(0, 0)
    g = d_min(T())
    assert g.target == T(0) and g.phi.values == (1,)
    s = shuffle_coface(T(2), 1, Shuffle("LR"))
    assert s.target == T(1, 1)
    assert s.column_maps[0][0].values == (0, 1, 1)
    assert s.column_maps[0][1].values == (0, 0, 1)
    e = vertical_codeg(T(1), 1, 0)
    assert e.target == T(0) and e.column_maps[0][0] == delta_codegeneracy(1, 0)
    assert d_max(T(1)).target == T(1, 0)
    assert horizontal_codeg(T(1, 0), 1).target == T(1)


def test_compose_identity_and_codeg_coface():
    f = vertical_coface(T(1, 0), 1, 1)
    assert compose(identity(f.target), f) == f
    assert compose(f, identity(f.source)) == f
    for j in range(2):
        up = vertical_coface(T(1), 1, j)
        assert compose(vertical_codeg(up.target, 1, j), up) == identity(T(1))


def test_vertical_cofaces_commute_across_columns():
    S = T(1, 1)
    a = vertical_coface(S, 1, 0)
    b = vertical_coface(a.target, 2, 1)
    c = vertical_coface(S, 2, 1)
    d = vertical_coface(c.target, 1, 0)
    assert compose(b, a) == compose(d, c)


def _random_maps(rng, n):
    trees = [t for d in range(4) for t in enumerate_trees(d)]
    out = []
    while len(out) < n:
        s, t = rng.choice(trees), rng.choice(trees)
        maps = all_maps(s, t)
        if maps:
            out.append(rng.choice(maps))
    return out


def test_composition_associative():
    rng = random.Random(3)
    trees = [t for d in range(4) for t in enumerate_trees(d)]
    checked = 0
    for _ in range(200):
        a, b, c, d = (rng.choice(trees) for _ in range(4))
        fs, gs, hs = all_maps(a, b), all_maps(b, c), all_maps(c, d)
        if not (fs and gs and hs):
            continue
        f, g, h = rng.choice(fs), rng.choice(gs), rng.choice(hs)
        assert compose(h, compose(g, f)) == compose(compose(h, g), f)
        checked += 1
    assert checked > 20


def test_hom_set_count():
    # phi in {(0,0), (0,1), (1,1)}; only (0,1) carries a column map
    assert len(all_maps(T(0), T(0))) == 3


@pytest.mark.parametrize("d", range(1, 6))
def test_boundary_squares_to_zero(d):
    for t in enumerate_trees(d):
        assert boundary_squared(t) == {}


def test_boundary_signs():
    signs = {(bt.kind, bt.map.source): bt.sign for bt in boundary_terms(T(1, 0))}
    assert signs[("dmax", T(1))] == -1  # (-1)^(K + n + 1) with K = n = 1
    terms = boundary_terms(T(0, 0))
    kinds = sorted(bt.kind for bt in terms)
    assert kinds == ["dmax", "dmin", "shuffle"]


def test_boundary_terms_are_codimension_one():
    for d in range(1, 6):
        for t in enumerate_trees(d):
            for bt in boundary_terms(t):
                assert bt.map.target == t and bt.map.source.dim == d - 1


def test_reedy_factorization():
    rng = random.Random(5)
    assert reedy_factor(identity(T(1, 0))) == (identity(T(1, 0)), identity(T(1, 0)))
    f = vertical_coface(T(1), 1, 0)
    assert reedy_factor(f) == (f, identity(T(1)))
    for f in _random_maps(rng, 150):
        plus, minus = reedy_factor(f)
        assert is_plus(plus) and is_minus(minus)
        assert compose(plus, minus) == f


def test_linking_numbers():
    for m, n in itertools.product(range(3), repeat=2):
        tau = DeltaMap(n, m + n, range(n + 1))
        pi = DeltaMap(m, m + n, [n + j for j in range(m + 1)])
        assert linking_number(tau, pi) == 1
    assert linking_number(delta_identity(1), delta_identity(1)) == 2
    assert linking_number(DeltaMap(0, 2, [0]), DeltaMap(0, 2, [2])) == 1


def test_relation_instances_hold_at_theta2_level():
    rels = relation_instances(3, 2)
    assert len(rels) > 1000
    assert all(r.holds() for r in rels)
