"""First-order deformations of a monoidal category read off from degree-3 cochains.

A normalized degree-3 cochain has four blocks:

* ``kappa`` on ``([1];[2])`` deforms composition, ``g o~ f = g o f + t kappa(f, g)``;
* ``beta_l`` on ``([2];[1,0])`` deforms ``m_{f,Y}``;
* ``beta_r`` on ``([2];[0,1])`` deforms ``m_{X,g}`` with the opposite sign, ``m~_{X,g} = m_{X,g} - t beta_r(g)``;
* ``gamma`` on ``([3];[0,0,0])`` deforms the associator, ``alpha~ = alpha (1 + t gamma)``.

The deformed category lives over ``K[t]/t^2``; its axiom residues are the ``t``-coefficients.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from typing import Any, Sequence

from .cochain import ComplexData, functor_data, identity_data
from .exactfield import (
    DualNumbers,
    ExactMatrix,
    Field,
    Subspace,
    cohomology_representatives,
    rank,
    solve,
)
from .moncat import FinMonCat, MonFunctor, Morphism, axiom_instances, CATEGORY_AXIOMS
from .theta2 import TwoTree
from .totalization import TotComplex, build_tot

KAPPA = TwoTree((2,))
BETA_L = TwoTree((1, 0))
BETA_R = TwoTree((0, 1))
GAMMA = TwoTree((0, 0, 0))
DEGREE3_BLOCKS = (KAPPA, BETA_L, BETA_R, GAMMA)

PHI1 = TwoTree((1,))
PSI1 = TwoTree((0, 0))

# Axiom name -> label of the deformation equation it yields at order t.
AXIOM_LABELS = {
    "associativity": "R1",
    "interchange": "R2",
    "whisker_functoriality": "R3",
    "assoc_nat_left": "R4",
    "assoc_nat_middle": "R5",
    "assoc_nat_right": "R6",
    "pentagon": "R7",
    "left_unit_nat": "R8",
    "right_unit_nat": "R9",
    "unit_coincidence": "R10",
}

# Label -> degree-4 trees whose component of ``d v`` the residue reproduces.
LABEL_TREES = {
    "R1": (TwoTree((3,)),),
    "R2": (TwoTree((1, 1)),),
    "R3": (TwoTree((2, 0)), TwoTree((0, 2))),
    "R4": (TwoTree((1, 0, 0)),),
    "R5": (TwoTree((0, 1, 0)),),
    "R6": (TwoTree((0, 0, 1)),),
    "R7": (TwoTree((0, 0, 0, 0)),),
}


# Label -> sign with which the order-t residue (lhs - rhs) equals the component of ``d v``.
RESIDUE_SIGNS = {"R1": -1, "R2": -1, "R3": -1, "R4": 1, "R5": -1, "R6": 1, "R7": -1}


class DeformationError(ValueError):
    """Cochain outside the domain of the deformation dictionary."""


# ---------------------------------------------------------------------------
# Degree-3 cochains as deformation data


@dataclass
class DeformationDatum:
    """The four blocks of a degree-3 cochain, each in ``A-hat_T`` coordinates."""

    data: ComplexData
    kappa: list[Any]
    beta_l: list[Any]
    beta_r: list[Any]
    gamma: list[Any]

    def block(self, tree: TwoTree) -> list[Any]:
        return {KAPPA: self.kappa, BETA_L: self.beta_l, BETA_R: self.beta_r, GAMMA: self.gamma}[tree]

    def value(self, tree: TwoTree, frame: tuple, inputs: Sequence[int]) -> tuple:
        """Output vector at a frame and basis inputs (column-major slot order)."""
        comp = self.data.component(tree)
        f = comp.frame_index[frame]
        vec = self.block(tree)
        return tuple(vec[comp.index(f, inputs, o)] for o in range(comp.out_dims[f]))

    def hat_vector(self) -> list[Any]:
        return self.kappa + self.beta_l + self.beta_r + self.gamma


def _tot_degree3(tot: TotComplex) -> None:
    if tot.max_degree < 3:
        raise ValueError("the totalization must reach degree 3")


def split_3cochain(tot: TotComplex, vec: Sequence[Any]) -> DeformationDatum:
    """Split a degree-3 vector of ``tot`` into its four blocks."""
    _tot_degree3(tot)
    space = tot.spaces[3]
    if len(vec) != space.dim:
        raise ValueError(f"expected a vector of length {space.dim}, got {len(vec)}")
    parts = {}
    for b in space.blocks:
        parts[b.tree] = b.space.basis.apply(list(vec[b.offset : b.offset + b.dim]))
    return DeformationDatum(tot.data, *(list(parts[t]) for t in DEGREE3_BLOCKS))


def join_3cochain(tot: TotComplex, datum: DeformationDatum) -> list[Any]:
    """Inverse of :func:`split_3cochain`; fails if a block leaves its subspace."""
    _tot_degree3(tot)
    out: list[Any] = []
    for b in tot.spaces[3].blocks:
        coords = solve(b.space.basis, datum.block(b.tree))
        if coords is None:
            raise DeformationError(f"block {b.tree} is not in the chosen subspace")
        out.extend(coords)
    return out


def zero_datum(data: ComplexData) -> DeformationDatum:
    K = data.field
    return DeformationDatum(data, *([K.zero] * data.component(t).hat_dim for t in DEGREE3_BLOCKS))


def unit_whisker_violations(datum: DeformationDatum) -> list[tuple]:
    """Frames where ``beta_l(f, e)`` or ``beta_r(e, g)`` is nonzero."""
    C = datum.data.C
    K = datum.data.field
    e = C.unit
    bad = []
    for tree, col in ((BETA_L, 1), (BETA_R, 0)):
        comp = datum.data.component(tree)
        for f, fr in enumerate(comp.frames):
            if fr[col] != (e,):
                continue
            for inp in comp.inputs(f):
                if any(not K.is_zero(c) for c in datum.value(tree, fr, inp)):
                    bad.append((str(tree), fr, inp))
    return bad


# ---------------------------------------------------------------------------
# The deformed category over dual numbers


def _perturb(K2: DualNumbers, v: tuple, w: Sequence[Any]) -> tuple:
    return tuple(K2.add(a, K2.t_times(b)) for a, b in zip(v, w))


def apply_deformation(datum: DeformationDatum) -> FinMonCat:
    """The category over ``K[t]/t^2`` with structure maps perturbed by ``datum``."""
    data = datum.data
    C = data.C
    K = C.field
    K2 = DualNumbers(K)
    Ct = C.base_change(K2, K2.embed)
    objs = range(C.n_objects)

    def zeros(n: int) -> tuple:
        return (K2.zero,) * n

    compose = dict(Ct.compose_table)
    for x, y, z in itertools.product(objs, repeat=3):
        dxy, dyz, dxz = C.hom(x, y), C.hom(y, z), C.hom(x, z)
        if not (dxy and dyz and dxz):
            continue
        table = compose.get((x, y, z)) or tuple(tuple(zeros(dxz) for _ in range(dxy)) for _ in range(dyz))
        compose[(x, y, z)] = tuple(
            tuple(_perturb(K2, table[b][a], datum.value(KAPPA, ((x, y, z),), (a, b))) for a in range(dxy))
            for b in range(dyz)
        )

    wr = dict(Ct.whisker_right_table)
    wl = dict(Ct.whisker_left_table)
    for x, x2, y in itertools.product(objs, repeat=3):
        src, tgt = C.t(x, y), C.t(x2, y)
        if C.hom(x, x2) and C.hom(src, tgt):
            table = wr.get((x, x2, y)) or tuple(zeros(C.hom(src, tgt)) for _ in range(C.hom(x, x2)))
            wr[(x, x2, y)] = tuple(
                _perturb(K2, table[a], datum.value(BETA_L, ((x, x2), (y,)), (a,))) for a in range(C.hom(x, x2))
            )
        # here (x, x2, y) plays (X, Y, Y') for m_{X,g}
        src, tgt = C.t(x, x2), C.t(x, y)
        if C.hom(x2, y) and C.hom(src, tgt):
            table = wl.get((x, x2, y)) or tuple(zeros(C.hom(src, tgt)) for _ in range(C.hom(x2, y)))
            wl[(x, x2, y)] = tuple(
                _perturb(K2, table[b], tuple(K.neg(c) for c in datum.value(BETA_R, ((x,), (x2, y)), (b,))))
                for b in range(C.hom(x2, y))
            )

    assoc = {}
    for x, y, z in itertools.product(objs, repeat=3):
        o = C.t(x, C.t(y, z))
        g = Morphism(o, o, datum.value(GAMMA, ((x,), (y,), (z,)), ()))
        assoc[(x, y, z)] = _perturb(K2, Ct.associator[(x, y, z)], C.comp(C.alpha(x, y, z), g).vec)

    return FinMonCat(
        field=K2,
        objects=Ct.objects,
        unit=Ct.unit,
        tensor_obj=Ct.tensor_obj,
        hom_dim=Ct.hom_dim,
        compose_table=compose,
        whisker_left_table=wl,
        whisker_right_table=wr,
        associator=assoc,
        lambda_=Ct.lambda_,
        rho=Ct.rho,
        identities=Ct.identities,
    )


# ---------------------------------------------------------------------------
# Axiom residues at order t


@dataclass
class AxiomResidue:
    label: str | None
    instances: int = 0
    nonzero: int = 0
    first_nonzero: tuple | None = None

    @property
    def passed(self) -> bool:
        return self.nonzero == 0

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "instances": self.instances,
            "nonzero": self.nonzero,
            "pass": self.passed,
            "first_nonzero": list(self.first_nonzero) if self.first_nonzero is not None else None,
        }


@dataclass
class DeformationReport:
    """Order-``t`` residues per axiom; ``order0`` lists axioms already failing at ``t = 0``."""

    axioms: dict[str, AxiomResidue]
    order0: list[str] = dc_field(default_factory=list)
    unit_whisker: list[tuple] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        """Every labelled equation holds (the triangle is reported but not required)."""
        return not self.order0 and all(r.passed for r in self.axioms.values() if r.label is not None)

    def failed(self) -> list[str]:
        return [r.label or k for k, r in self.axioms.items() if not r.passed]

    def as_dict(self) -> dict:
        return {
            "pass": self.passed,
            "order0_failures": self.order0,
            "unit_whisker_violations": [list(map(str, v)) for v in self.unit_whisker],
            "axioms": {k: r.as_dict() for k, r in self.axioms.items()},
        }


def _t_part(f: Morphism) -> tuple:
    return tuple(b for _, b in f.vec)


def axiom_check_mod_t2(datum: DeformationDatum) -> DeformationReport:
    """Check the deformed category's axioms modulo ``t^2``."""
    Ct = apply_deformation(datum)
    K = datum.data.field
    names = [n for n in CATEGORY_AXIOMS]
    results = {n: AxiomResidue(AXIOM_LABELS.get(n)) for n in names}
    order0: set[str] = set()
    for name, idx, lhs, rhs in axiom_instances(Ct):
        r = results[name]
        r.instances += 1
        diff = Ct.sub(lhs, rhs)
        if any(not K.is_zero(a) for a, _ in diff.vec):
            order0.add(name)
        if any(not K.is_zero(b) for b in _t_part(diff)):
            r.nonzero += 1
            if r.first_nonzero is None:
                r.first_nonzero = idx
    return DeformationReport(results, sorted(order0), unit_whisker_violations(datum))


def _instance_slot(C: FinMonCat, name: str, idx: tuple) -> tuple[TwoTree, tuple, tuple, Morphism | None] | None:
    """Tree, frame, inputs and left normalizer placing a residue into a degree-4 component."""
    t = C.t
    if name == "associativity":
        x, y, z, w, a, b, c = idx
        return TwoTree((3,)), ((x, y, z, w),), (a, b, c), None
    if name == "interchange":
        x, x2, y, y2, a, b = idx
        return TwoTree((1, 1)), ((x, x2), (y, y2)), (a, b), None
    if name == "whisker_functoriality":
        if idx[-1] == "right":
            x, x2, x4, a, b, y, _ = idx
            return TwoTree((2, 0)), ((x, x2, x4), (y,)), (a, b), None
        y, x, x2, x4, a, b, _ = idx
        return TwoTree((0, 2)), ((y,), (x, x2, x4)), (a, b), None
    if name == "assoc_nat_left":
        x, x2, a, y, z = idx
        return TwoTree((1, 0, 0)), ((x, x2), (y,), (z,)), (a,), C.alpha_inv(x2, y, z)
    if name == "assoc_nat_middle":
        y, x, x2, a, z = idx
        return TwoTree((0, 1, 0)), ((y,), (x, x2), (z,)), (a,), C.alpha_inv(y, x2, z)
    if name == "assoc_nat_right":
        y, z, x, x2, a = idx
        return TwoTree((0, 0, 1)), ((y,), (z,), (x, x2)), (a,), C.alpha_inv(y, z, x2)
    if name == "pentagon":
        x, y, z, w = idx
        lhs = C.comp(C.alpha(t(x, y), z, w), C.alpha(x, y, t(z, w)))
        return TwoTree((0, 0, 0, 0)), ((x,), (y,), (z,), (w,)), (), C.inverse(lhs)
    return None


def residue_components(datum: DeformationDatum) -> dict[str, dict[TwoTree, list[Any]]]:
    """Signed order-``t`` residues of R1..R7 as vectors in ``A-hat`` of their degree-4 trees.

    For a cochain ``v`` in the dictionary domain these equal the matching components of ``d v``.
    """
    data = datum.data
    C = data.C
    K = data.field
    Ct = apply_deformation(datum)
    out: dict[str, dict[TwoTree, list[Any]]] = {}
    for label, trees in LABEL_TREES.items():
        out[label] = {T: [K.zero] * data.component(T).hat_dim for T in trees}
    for name, idx, lhs, rhs in axiom_instances(Ct):
        label = AXIOM_LABELS.get(name)
        if label not in LABEL_TREES:
            continue
        slot = _instance_slot(C, name, idx)
        tree, frame, inputs, norm = slot
        res = Morphism(lhs.src, lhs.tgt, _t_part(Ct.sub(lhs, rhs) if RESIDUE_SIGNS[label] > 0 else Ct.sub(rhs, lhs)))
        if norm is not None:
            res = C.comp(norm, res)
        comp = data.component(tree)
        f = comp.frame_index[frame]
        vec = out[label][tree]
        for o, c in enumerate(res.vec):
            vec[comp.index(f, inputs, o)] = c
    return out


# ---------------------------------------------------------------------------
# Twists


@dataclass
class TwistDatum:
    """``phi1`` on ``([1];[1])`` and ``psi1`` on ``([2];[0,0])`` in ``A-hat`` coordinates.

    The twist functor is ``id + t phi1`` with constraint ``X Y -> X Y`` equal to ``1 + t psi1``.
    """

    data: ComplexData
    phi1: list[Any]
    psi1: list[Any]

    def phi(self, f: Morphism) -> Morphism:
        comp = self.data.component(PHI1)
        K = self.data.field
        out = [K.zero] * self.data.D.hom(f.src, f.tgt)
        if not out:
            return Morphism(f.src, f.tgt, ())
        fr = comp.frame_index[((f.src, f.tgt),)]
        for a, c in enumerate(f.vec):
            if K.is_zero(c):
                continue
            for o in range(len(out)):
                out[o] = K.add(out[o], K.mul(c, self.phi1[comp.index(fr, (a,), o)]))
        return Morphism(f.src, f.tgt, tuple(out))

    def psi(self, x: int, y: int) -> Morphism:
        comp = self.data.component(PSI1)
        fr = comp.frame_index[((x,), (y,))]
        o = self.data.C.t(x, y)
        return Morphism(o, o, tuple(self.psi1[comp.index(fr, (), i)] for i in range(comp.out_dims[fr])))


def zero_twist(data: ComplexData) -> TwistDatum:
    K = data.field
    return TwistDatum(data, [K.zero] * data.component(PHI1).hat_dim, [K.zero] * data.component(PSI1).hat_dim)


def twist_violations(tw: TwistDatum) -> list[tuple]:
    """Where ``phi1(id) != 0`` or ``psi1`` with a unit argument is nonzero."""
    C = tw.data.C
    K = tw.data.field
    bad = []
    for x in range(C.n_objects):
        if C.hom(x, x) and not C.is_zero(tw.phi(C.id(x))):
            bad.append(("phi1(id)", x))
    for x in range(C.n_objects):
        for a, b in ((C.unit, x), (x, C.unit)):
            if any(not K.is_zero(c) for c in tw.psi(a, b).vec):
                bad.append(("psi1", a, b))
    return sorted(set(bad))


def random_twist(data: ComplexData, rng: random.Random, bound: int = 3) -> TwistDatum:
    """A twist datum with small integer entries satisfying the normalization invariants."""
    K = data.field
    C = data.C
    phi_space = _phi_domain(data)
    coeffs = [K.from_int(rng.randint(-bound, bound)) for _ in range(phi_space.dim)]
    phi1 = phi_space.basis.apply(coeffs) if phi_space.dim else [K.zero] * data.component(PHI1).hat_dim
    comp = data.component(PSI1)
    psi1 = [K.from_int(rng.randint(-bound, bound)) for _ in range(comp.hat_dim)]
    for f, fr in enumerate(comp.frames):
        if C.unit in (fr[0][0], fr[1][0]):
            for o in range(comp.out_dims[f]):
                psi1[comp.index(f, (), o)] = K.zero
    return TwistDatum(data, list(phi1), psi1)


def _phi_domain(data: ComplexData) -> Subspace:
    from .cochain import normalized_subspace

    return normalized_subspace(data, PHI1)


def twist_cochain(tot: TotComplex, tw: TwistDatum) -> list[Any]:
    """The degree-2 vector ``omega`` whose coboundary deforms by ``tw``; its ``(2;0,0)`` block is ``-psi1``."""
    K = tot.data.field
    out: list[Any] = []
    for b in tot.spaces[2].blocks:
        hat = tw.phi1 if b.tree == PHI1 else [K.neg(c) for c in tw.psi1]
        coords = solve(b.space.basis, hat)
        if coords is None:
            raise DeformationError(f"twist block {b.tree} is not in the chosen subspace")
        out.extend(coords)
    return out


def twisted_category(tw: TwistDatum) -> FinMonCat:
    """The category over ``K[t]/t^2`` transported along the infinitesimal twist."""
    data = tw.data
    C = data.C
    K = C.field
    K2 = DualNumbers(K)
    Ct = C.base_change(K2, K2.embed)
    objs = range(C.n_objects)
    t = C.t

    def lift(m: Morphism, dm: Morphism) -> tuple:
        return tuple(K2.add(K2.embed(a), K2.t_times(b)) for a, b in zip(m.vec, dm.vec))

    compose = {}
    for x, y, z in itertools.product(objs, repeat=3):
        if not (C.hom(x, y) and C.hom(y, z) and C.hom(x, z)):
            continue
        rows = []
        for b in range(C.hom(y, z)):
            g = C.basis(y, z, b)
            row = []
            for a in range(C.hom(x, y)):
                f = C.basis(x, y, a)
                gf = C.comp(g, f)
                kappa = C.sub(C.sub(tw.phi(gf), C.comp(tw.phi(g), f)), C.comp(g, tw.phi(f)))
                row.append(lift(gf, kappa))
            rows.append(tuple(row))
        compose[(x, y, z)] = tuple(rows)

    wl, wr = {}, {}
    for x, y, y2 in itertools.product(objs, repeat=3):
        if C.hom(y, y2) and C.hom(t(x, y), t(x, y2)):
            imgs = []
            for b in range(C.hom(y, y2)):
                g = C.basis(y, y2, b)
                m = C.wl(x, g)
                dm = C.add(tw.phi(m), C.comp(tw.psi(x, y2), m))
                dm = C.sub(C.sub(dm, C.wl(x, tw.phi(g))), C.comp(m, tw.psi(x, y)))
                imgs.append(lift(m, dm))
            wl[(x, y, y2)] = tuple(imgs)
        # (x, y, y2) read as (X, X', Y) for m_{f,Y}
        if C.hom(x, y) and C.hom(t(x, y2), t(y, y2)):
            imgs = []
            for a in range(C.hom(x, y)):
                f = C.basis(x, y, a)
                m = C.wr(f, y2)
                dm = C.add(tw.phi(m), C.comp(tw.psi(y, y2), m))
                dm = C.sub(C.sub(dm, C.wr(tw.phi(f), y2)), C.comp(m, tw.psi(x, y2)))
                imgs.append(lift(m, dm))
            wr[(x, y, y2)] = tuple(imgs)

    assoc = {}
    for x, y, z in itertools.product(objs, repeat=3):
        al, ali = C.alpha(x, y, z), C.alpha_inv(x, y, z)
        # additive perturbation gamma' o alpha with gamma' on (X Y) Z
        g = C.add(C.wr(tw.psi(x, y), z), tw.psi(t(x, y), z))
        g = C.sub(g, C.comp_all(al, tw.psi(x, t(y, z)), ali))
        g = C.sub(g, C.comp_all(al, C.wl(x, tw.psi(y, z)), ali))
        g = C.add(g, C.comp(tw.phi(al), ali))
        assoc[(x, y, z)] = lift(al, C.comp(g, al))

    return FinMonCat(
        field=K2,
        objects=Ct.objects,
        unit=Ct.unit,
        tensor_obj=Ct.tensor_obj,
        hom_dim=Ct.hom_dim,
        compose_table=compose,
        whisker_left_table=wl,
        whisker_right_table=wr,
        associator=assoc,
        lambda_=Ct.lambda_,
        rho=Ct.rho,
        identities=Ct.identities,
    )


def structure_differences(C1: FinMonCat, C2: FinMonCat) -> list[tuple]:
    """Basis-level disagreements of composition, whiskerings and associators."""
    objs = range(C1.n_objects)
    out = []
    for x, y, z in itertools.product(objs, repeat=3):
        for a, b in itertools.product(range(C1.hom(x, y)), range(C1.hom(y, z))):
            f, g = C1.basis(x, y, a), C1.basis(y, z, b)
            if not C1.equal(C1.comp(g, f), C2.comp(g, f)):
                out.append(("compose", x, y, z, a, b))
    for x, y, y2 in itertools.product(objs, repeat=3):
        for b in range(C1.hom(y, y2)):
            g = C1.basis(y, y2, b)
            if not C1.equal(C1.wl(x, g), C2.wl(x, g)):
                out.append(("whisker_left", x, y, y2, b))
            if not C1.equal(C1.wr(g, x), C2.wr(g, x)):
                out.append(("whisker_right", y, y2, x, b))
    for x, y, z in itertools.product(objs, repeat=3):
        if not C1.equal(C1.alpha(x, y, z), C2.alpha(x, y, z)):
            out.append(("associator", x, y, z))
    return out


@dataclass
class TwistResult:
    omega: list[Any]
    three_cochain: list[Any]
    deformation: DeformationDatum
    twisted: FinMonCat
    differences: list[tuple]

    @property
    def agrees(self) -> bool:
        return not self.differences


def twist_coboundary(tot: TotComplex, tw: TwistDatum) -> TwistResult:
    """``d omega`` in degree 3, the category it deforms to and the directly twisted category."""
    if tot.max_degree < 3:
        raise ValueError("the totalization must reach degree 3")
    bad = twist_violations(tw)
    if bad:
        raise DeformationError(f"twist datum is not normalized: {bad[:3]}")
    omega = twist_cochain(tot, tw)
    three = tot.differentials[2].apply(omega)
    datum = split_3cochain(tot, three)
    twisted = twisted_category(tw)
    return TwistResult(omega, three, datum, twisted, structure_differences(apply_deformation(datum), twisted))


# ---------------------------------------------------------------------------
# Classes


def _shift_into(rep: Sequence[Any], d_in: ExactMatrix, rows: list[dict[int, Any]], K: Field) -> list[Any] | None:
    """``rep + d_in c`` satisfying the linear conditions ``rows``, or None."""
    if not rows:
        return list(rep)
    R = ExactMatrix(K, len(rows), len(rep), dict(enumerate(rows)))
    lhs = R @ d_in
    rhs = [K.neg(c) for c in R.apply(list(rep))]
    c = solve(lhs, rhs)
    if c is None:
        return None
    shift = d_in.apply(c)
    return [K.add(a, b) for a, b in zip(rep, shift)]


def _coordinate_rows(tot: TotComplex, degree: int, tree: TwoTree, hat_coords: Sequence[int]) -> list[dict[int, Any]]:
    """Rows reading the given ``A-hat_T`` coordinates off a Tot vector."""
    b = tot.block(degree, tree)
    B = b.space.basis
    rows = []
    for i in hat_coords:
        row = {b.offset + j: v for j in range(B.ncols) if not tot.data.field.is_zero(v := B.get(i, j))}
        rows.append(row)
    return rows


def _unit_coords(data: ComplexData, tree: TwoTree, col: int) -> list[int]:
    comp = data.component(tree)
    e = data.C.unit
    out = []
    for f, fr in enumerate(comp.frames):
        if fr[col] == (e,):
            for inp in comp.inputs(f):
                out.extend(comp.index(f, inp, o) for o in range(comp.out_dims[f]))
    return out


def deformation_classes(C: FinMonCat, tot: TotComplex | None = None) -> tuple[int, list[DeformationDatum]]:
    """``dim H^3`` and representatives moved into the dictionary domain."""
    data = identity_data(C)
    tot = tot if tot is not None else build_tot(data, 4, normalized=True)
    K = data.field
    reps = cohomology_representatives(tot.d_in(3), tot.differentials[3])
    rows = _coordinate_rows(tot, 3, BETA_L, _unit_coords(data, BETA_L, 1))
    rows += _coordinate_rows(tot, 3, BETA_R, _unit_coords(data, BETA_R, 0))
    out = []
    for r in reps:
        shifted = _shift_into(r, tot.d_in(3), rows, K)
        if shifted is None:
            raise DeformationError("a class has no representative with beta vanishing on the unit")
        out.append(split_3cochain(tot, shifted))
    return len(reps), out


@dataclass
class FunctorDeformation:
    """``phi`` on ``([1];[1])`` and ``psi`` on ``([2];[0,0])``: ``F~ = F + t phi``, ``J~ = J (1 - t psi)``."""

    data: ComplexData
    phi: list[Any]
    psi: list[Any]


def functor_deformation_classes(F: MonFunctor, tot: TotComplex | None = None) -> tuple[int, list[FunctorDeformation]]:
    """``dim H^2`` of the complex of ``(F, F, id, id)`` and unit-normalized representatives."""
    data = functor_data(F)
    tot = tot if tot is not None else build_tot(data, 3, normalized=True)
    K = data.field
    reps = cohomology_representatives(tot.d_in(2), tot.differentials[2])
    e = data.C.unit
    comp = data.component(PSI1)
    unit_coords = [
        comp.index(f, (), o)
        for f, fr in enumerate(comp.frames)
        if e in (fr[0][0], fr[1][0])
        for o in range(comp.out_dims[f])
    ]
    rows = _coordinate_rows(tot, 2, PSI1, unit_coords)
    out = []
    for r in reps:
        shifted = _shift_into(r, tot.d_in(2), rows, K)
        if shifted is None:
            raise DeformationError("a class has no unit-normalized representative")
        hat = {b.tree: b.space.basis.apply(shifted[b.offset : b.offset + b.dim]) for b in tot.spaces[2].blocks}
        out.append(FunctorDeformation(data, list(hat[PHI1]), list(hat[PSI1])))
    return len(reps), out


def functor_deformation_from_vector(tot: TotComplex, vec: Sequence[Any]) -> FunctorDeformation:
    hat = {b.tree: b.space.basis.apply(list(vec[b.offset : b.offset + b.dim])) for b in tot.spaces[2].blocks}
    return FunctorDeformation(tot.data, list(hat[PHI1]), list(hat[PSI1]))


def apply_functor_deformation(fd: FunctorDeformation) -> MonFunctor:
    """The deformed functor between the base changes to ``K[t]/t^2``."""
    data = fd.data
    F, C, D = data.F, data.C, data.D
    K = C.field
    K2 = DualNumbers(K)
    Ct, Dt = C.base_change(K2, K2.embed), D.base_change(K2, K2.embed)
    tw = TwistDatum(data, fd.phi, fd.psi)
    objs = range(C.n_objects)
    hom_maps = {}
    for x, y in itertools.product(objs, repeat=2):
        if not C.hom(x, y):
            continue
        imgs = []
        for a in range(C.hom(x, y)):
            f = C.basis(x, y, a)
            imgs.append(tuple(K2.add(K2.embed(p), K2.t_times(q)) for p, q in zip(F(f).vec, tw.phi(f).vec)))
        hom_maps[(x, y)] = tuple(imgs)
    cons = {}
    for x, y in itertools.product(objs, repeat=2):
        J = F.phi(x, y)
        dJ = D.scale(K.from_int(-1), D.comp(J, tw.psi(x, y)))
        cons[(x, y)] = tuple(K2.add(K2.embed(p), K2.t_times(q)) for p, q in zip(J.vec, dJ.vec))
    return MonFunctor(Ct, Dt, F.obj_map, hom_maps, cons, tuple(K2.embed(c) for c in F.unit_constraint))


# ---------------------------------------------------------------------------
# Independent oracle


def group_cohomology_oracle(table: Sequence[Sequence[int]], field: Field, max_degree: int = 3) -> list[int]:
    """``dim H^n(G; k)``, ``n <= max_degree``, from the inhomogeneous bar complex."""
    n = len(table)
    if n > 16:
        raise ValueError("group order above 16 is out of range for the oracle")
    K = field
    tuples = [list(itertools.product(range(n), repeat=d)) for d in range(max_degree + 2)]
    index = [{g: i for i, g in enumerate(ts)} for ts in tuples]

    def coboundary(d: int) -> ExactMatrix:
        # (df)(g_1..g_{d+1}) = f(g_2..) + sum (-1)^i f(.. g_i g_{i+1} ..) + (-1)^{d+1} f(g_1..g_d)
        entries: dict[int, dict[int, Any]] = {}
        for r, g in enumerate(tuples[d + 1]):
            row: dict[int, int] = {}
            faces = [(1, g[1:])]
            for i in range(d):
                faces.append(((-1) ** (i + 1), g[:i] + (table[g[i]][g[i + 1]],) + g[i + 2 :]))
            faces.append(((-1) ** (d + 1), g[:d]))
            for s, h in faces:
                c = index[d][h]
                row[c] = row.get(c, 0) + s
            clean = {c: K.from_int(v) for c, v in row.items() if not K.is_zero(K.from_int(v))}
            if clean:
                entries[r] = clean
        return ExactMatrix(K, len(tuples[d + 1]), len(tuples[d]), entries)

    ds = [coboundary(d) for d in range(max_degree + 1)]
    ranks = [rank(M) for M in ds]
    return [len(tuples[d]) - ranks[d] - (ranks[d - 1] if d else 0) for d in range(max_degree + 1)]
