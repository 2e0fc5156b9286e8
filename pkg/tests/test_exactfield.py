from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy

from theta2def.exactfield import (
    GF,
    QQ,
    DualNumbers,
    ExactMatrix,
    LinAlgError,
    Subspace,
    check_composable_zero,
    cohomology_dim,
    cohomology_representatives,
    field_from_descriptor,
    image_basis,
    kernel_basis,
    rank,
    solve,
)


def _random_dense(rng, K, r, c, density=0.5):
    return [[K.random(rng) if rng.random() < density else K.zero for _ in range(c)] for _ in range(r)]


def test_field_arithmetic():
    F = GF(5)
    assert F.mul(3, F.inv(3)) == 1
    assert F.coerce(-1) == 4
    assert QQ.div(Fraction(1), Fraction(3)) == Fraction(1, 3)
    with pytest.raises(ZeroDivisionError):
        QQ.inv(Fraction(0))
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_field_descriptors():
    assert field_from_descriptor("Q") == QQ
    assert field_from_descriptor({"Fp": 3}) == GF(3)
    assert field_from_descriptor("F2") == GF(2)
    with pytest.raises(ValueError):
        field_from_descriptor("R")


def test_dual_numbers():
    D = DualNumbers(QQ)
    t = D.t_times(Fraction(1))
    assert D.is_zero(D.mul(t, t))
    x = D.add(D.embed(Fraction(2)), t)
    assert D.mul(x, D.inv(x)) == D.one
    with pytest.raises(ZeroDivisionError):
        D.inv(t)


def test_zero_and_small_ranks():
    assert rank(ExactMatrix.zeros(QQ, 3, 4)) == 0
    assert rank(ExactMatrix.from_dense(GF(2), [[1, 1], [1, 1]])) == 1
    assert rank(ExactMatrix.from_dense(GF(2), [[1, 1], [1, 0]])) == 2
    assert rank(ExactMatrix.from_dense(QQ, [[2, 4], [1, 2]])) == 1


def test_rank_over_f2_differs_from_q():
    M = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
    assert rank(ExactMatrix.from_dense(QQ, M)) == 3
    assert rank(ExactMatrix.from_dense(GF(2), M)) == 2


@pytest.mark.parametrize("seed", range(15))
def test_rank_and_kernel_against_sympy(seed):
    rng = random.Random(seed)
    r, c = rng.randint(1, 7), rng.randint(1, 7)
    dense = _random_dense(rng, QQ, r, c)
    M = ExactMatrix.from_dense(QQ, dense)
    S = sympy.Matrix(dense)
    assert rank(M) == S.rank()
    K = kernel_basis(M)
    assert K.dim == len(S.nullspace())
    for v in K.vectors():
        assert all(x == 0 for x in M.apply(v))


@pytest.mark.parametrize("seed", range(10))
def test_rank_mod_p_against_sympy(seed):
    rng = random.Random(100 + seed)
    p = rng.choice([2, 3, 5])
    F = GF(p)
    r, c = rng.randint(1, 6), rng.randint(1, 6)
    dense = _random_dense(rng, F, r, c)
    S = sympy.Matrix(dense)
    # echelon form over GF(p) via sympy's DomainMatrix
    from sympy.polys.matrices import DomainMatrix
    from sympy.polys.domains import GF as SGF

    dm = DomainMatrix.from_Matrix(S).convert_to(SGF(p))
    assert rank(ExactMatrix.from_dense(F, dense)) == dm.rank()


def test_solve_and_image():
    M = ExactMatrix.from_dense(QQ, [[1, 2], [3, 4], [5, 6]])
    x = solve(M, [Fraction(3), Fraction(7), Fraction(11)])
    assert x == [1, 1]
    assert solve(M, [1, 0, 0]) is None
    assert image_basis(M).dim == 2


def test_subspace_operations():
    V = Subspace.span(QQ, 3, [[1, 0, 0], [2, 0, 0], [0, 1, 0]])
    assert V.dim == 2
    assert V.contains([3, 5, 0]) and not V.contains([0, 0, 1])
    assert V.coordinates([3, 5, 0]) is not None
    assert Subspace.full(QQ, 3).contains_subspace(V)
    assert V.equals(Subspace.span(QQ, 3, [[1, 1, 0], [1, -1, 0]]))


def test_cohomology_of_zero_maps():
    z_in = ExactMatrix.zeros(QQ, 1, 0)
    z_out = ExactMatrix.zeros(QQ, 0, 1)
    assert cohomology_dim(z_in, z_out) == 1
    assert len(cohomology_representatives(z_in, z_out)) == 1


def test_cohomology_of_exact_sequence():
    d0 = ExactMatrix.from_dense(QQ, [[1], [1]])
    d1 = ExactMatrix.from_dense(QQ, [[1, -1]])
    assert cohomology_dim(d0, d1) == 0


def test_non_composable_pair_rejected():
    d0 = ExactMatrix.from_dense(QQ, [[1], [0]])
    d1 = ExactMatrix.from_dense(QQ, [[1, 0]])
    with pytest.raises(LinAlgError):
        check_composable_zero(d0, d1)


def test_matrix_algebra_identities():
    rng = random.Random(7)
    A = ExactMatrix.from_dense(QQ, _random_dense(rng, QQ, 3, 4))
    B = ExactMatrix.from_dense(QQ, _random_dense(rng, QQ, 4, 2))
    assert (A @ B).transpose() == B.transpose() @ A.transpose()
    assert (A - A).is_zero()
    assert ExactMatrix.identity(QQ, 3) @ A == A
