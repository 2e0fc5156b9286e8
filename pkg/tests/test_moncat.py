from __future__ import annotations

import dataclasses
from fractions import Fraction

import pytest

from conftest import make_category
from theta2def.exactfield import GF, QQ, DualNumbers
from theta2def.moncat import (
    CATEGORY_AXIOMS,
    CategoryError,
    coherence_iso,
    cyclic_group_table,
    deloop_algebra,
    identity_functor,
    identity_on_objects_functor,
    identity_transform,
    validate,
    validate_functor,
    validate_transform,
    vec_g_omega,
)


@pytest.mark.parametrize("name", ["z2", "z2w", "z2f2", "k", "dual", "dualf2", "z3", "z2w_x3", "z3_dual"])
def test_builtin_categories_valid(name):
    rep = validate(make_category(name))
    assert rep.passed, rep.failed()
    assert set(CATEGORY_AXIOMS) <= set(rep.axioms)


def test_z3_over_f3_valid():
    assert validate(vec_g_omega(cyclic_group_table(3), field=GF(3))).passed


def test_constant_minus_one_fails_pentagon():
    C = vec_g_omega(cyclic_group_table(2), lambda a, b, c: -1, check_normalized=False)
    assert "pentagon" in validate(C).failed()


def test_unnormalized_omega_rejected():
    with pytest.raises(CategoryError):
        vec_g_omega(cyclic_group_table(2), lambda a, b, c: -1)


def test_non_cocycle_fails_pentagon():
    # normalized but not closed: -1 only at (1,1,2)
    w = lambda a, b, c: -1 if (a, b, c) == (1, 1, 2) else 1
    C = vec_g_omega(cyclic_group_table(3), w)
    assert validate(C).failed() == ["pentagon"]


def test_non_group_table_rejected():
    with pytest.raises(CategoryError):
        vec_g_omega([[0, 1], [1, 1]])


def test_matrix_algebra_rejected():
    # M_2(k) in the basis of matrix units E11, E12, E21, E22
    def unit_index(i, j):
        return 2 * i + j

    mult = [[[0] * 4 for _ in range(4)] for _ in range(4)]
    for i, j, k, l in ((a, b, c, d) for a in range(2) for b in range(2) for c in range(2) for d in range(2)):
        if j == k:
            mult[unit_index(i, j)][unit_index(k, l)][unit_index(i, l)] = 1
    with pytest.raises(CategoryError):
        deloop_algebra(mult, [1, 0, 0, 1])


def test_wrong_unit_rejected():
    mult = [[[1, 0], [0, 1]], [[0, 1], [1, 1]]]
    C_ok = deloop_algebra(mult, [1, 0])  # k[x]/(x^2 - x - 1) is fine
    assert validate(C_ok).passed
    with pytest.raises(CategoryError):
        deloop_algebra([[[1, 0], [0, 1]], [[0, 1], [0, 0]]], [0, 1])


def test_non_coherent_associator_fails():
    C = make_category("dual")
    bad = dataclasses.replace(C, associator={(0, 0, 0): (Fraction(1), Fraction(1))}, _cache={}, _memo={})
    assert "pentagon" in validate(bad).failed()


def test_coherence_isos():
    C = make_category("z2w")
    iso = coherence_iso(C, (1, (1, 1)), ((1, 1), 1))
    assert C.equal(iso, C.scale(-1, C.id(1)))
    assert C.equal(coherence_iso(C, (None, 1), 1), C.lam(1))
    assert C.equal(coherence_iso(C, (1, None), 1), C.rho_(1))
    w = ((1, 1), (1, 1))
    assert C.equal(coherence_iso(C, w, w), C.id(0))
    with pytest.raises(CategoryError):
        coherence_iso(C, (0, 1), (1, 0))


def test_coherence_iso_path_independent():
    import random

    C = make_category("z2w")
    a, b = (1, (1, (1, 1))), (((1, 1), 1), 1)
    ref = coherence_iso(C, a, b)
    for seed in range(10):
        assert C.equal(coherence_iso(C, a, b, random.Random(seed)), ref)


def test_base_change_to_dual_numbers():
    C = make_category("z2w")
    D = DualNumbers(QQ)
    assert validate(C.base_change(D, D.embed)).passed


def test_identity_functor_and_transform():
    for name in ("z2w", "dual", "z3_dual"):
        C = make_category(name)
        F = identity_functor(C)
        assert validate_functor(F).passed
        assert validate_transform(identity_transform(F)).passed


def test_functor_constraint_hexagon():
    z2 = make_category("z2")
    flip = lambda x, y: -1 if (x, y) == (1, 1) else 1
    rep = validate_functor(identity_on_objects_functor(z2, flip))
    # a symmetric 2-cocycle on Z/2: every hexagon instance is checked and holds
    assert rep.passed and rep.axioms["hexagon"].instances == 8
    z3 = vec_g_omega(cyclic_group_table(3))
    rep = validate_functor(identity_on_objects_functor(z3, flip))
    assert rep.failed() == ["hexagon"]
    assert rep.axioms["hexagon"].instances == 27


def test_functor_unit_compatibility_failure():
    z2 = make_category("z2")
    rep = validate_functor(identity_on_objects_functor(z2, lambda x, y: -1 if x == 0 and y == 1 else 1))
    assert "left_unit_compat" in rep.failed() or "right_unit_compat" in rep.failed()


def test_report_serialization():
    rep = validate(make_category("z2"))
    d = rep.as_dict()
    assert d["pass"] is True
    assert d["axioms"]["pentagon"]["failures"] == 0
