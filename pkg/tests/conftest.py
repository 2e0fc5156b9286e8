from __future__ import annotations

import pytest

from theta2def.exactfield import GF, QQ
from theta2def.moncat import (
    cyclic_group_table,
    deloop_algebra,
    dual_number_algebra,
    graded_algebra_category,
    ground_field_algebra,
    truncated_polynomial_algebra,
    vec_g_omega,
    z2_sign_cocycle,
)


def make_category(name: str):
    z2 = cyclic_group_table(2)
    if name == "z2":
        return vec_g_omega(z2)
    if name == "z2w":
        return vec_g_omega(z2, z2_sign_cocycle)
    if name == "z2f2":
        return vec_g_omega(z2, field=GF(2))
    if name == "k":
        return deloop_algebra(*ground_field_algebra())
    if name == "dual":
        return deloop_algebra(*dual_number_algebra())
    if name == "dualf2":
        return deloop_algebra(*dual_number_algebra(), field=GF(2))
    if name == "z3":
        return vec_g_omega(cyclic_group_table(3))
    if name == "z2w_x3":
        return graded_algebra_category(z2, *truncated_polynomial_algebra(3), z2_sign_cocycle)
    if name == "z3_dual":
        return graded_algebra_category(cyclic_group_table(3), *dual_number_algebra())
    raise KeyError(name)


CORE = ["z2", "z2w", "z2f2", "k", "dual", "dualf2"]


@pytest.fixture(params=CORE)
def core_category(request):
    return make_category(request.param)


@pytest.fixture
def field_q():
    return QQ
