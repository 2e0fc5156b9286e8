"""Component spaces of the Theta_2 deformation complex and the Theta_2 action on them.

For a tree ``T`` and data ``(C, D, F, F, id, id)`` a frame fills column ``j`` with a
chain of objects ``X_{j,0}, ..., X_{j,n_j}``.  The component of a frame is

    Hom( (x)_{j,a} C(X_{j,a-1}, X_{j,a}),  D(F(bot), F(top)) )

where ``bot`` (resp. ``top``) is the right-nested tensor of the ``X_{j,0}``
(resp. ``X_{j,n_j}``) with column 1 leftmost.  Coordinates are ordered by frame,
then by input basis tuple (slots column-major, mixed radix), then by output basis.

A map ``Phi: S -> T`` acts ``A_S -> A_T`` by the strict formula (vertical
composites fed into the source cochain, extreme columns whiskered on) conjugated
by the canonical structural isomorphisms produced by ``moncat.coherence_iso``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from typing import Any, Iterator, Sequence

from .exactfield import ExactMatrix, Field, Subspace, kernel_basis
from .moncat import (
    FinMonCat,
    MonFunctor,
    MonTransform,
    Morphism,
    TensorWord,
    coherence_iso,
    identity_functor,
    identity_transform,
    right_nested,
    validate,
    validate_functor,
    validate_transform,
    word_object,
)
from .theta2 import Relation, Theta2Map, TwoTree


class UnsupportedData(NotImplementedError):
    """Data outside the supported class ``(C, D, F, F, id, id)``."""


@dataclass(eq=False)
class ComplexData:
    C: FinMonCat
    D: FinMonCat
    F: MonFunctor
    G: MonFunctor
    eta: MonTransform
    theta: MonTransform
    _components: dict = dc_field(default_factory=dict, repr=False)
    _actions: dict = dc_field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.F.source is not self.C or self.F.target is not self.D:
            raise ValueError("F must be a functor C -> D")
        if self.G is not self.F:
            raise UnsupportedData("only G = F is supported")
        if not (self.eta.is_identity and self.theta.is_identity):
            raise UnsupportedData("only identity transformations are supported")

    @property
    def field(self) -> Field:
        return self.D.field

    def check(self) -> dict:
        """Validator reports for every piece of data."""
        return {
            "C": validate(self.C).as_dict(),
            "D": validate(self.D).as_dict(),
            "F": validate_functor(self.F).as_dict(),
            "eta": validate_transform(self.eta).as_dict(),
        }

    def component(self, tree: TwoTree) -> TreeComponent:
        comp = self._components.get(tree)
        if comp is None:
            comp = build_component(self, tree)
            self._components[tree] = comp
        return comp


def identity_data(C: FinMonCat) -> ComplexData:
    F = identity_functor(C)
    eta = identity_transform(F)
    return ComplexData(C, C, F, F, eta, eta)


def functor_data(F: MonFunctor) -> ComplexData:
    eta = identity_transform(F)
    return ComplexData(F.source, F.target, F, F, eta, eta)


# ---------------------------------------------------------------------------
# Frames and components


Frame = tuple[tuple[int, ...], ...]


def _chains(C: FinMonCat, length: int) -> list[tuple[int, ...]]:
    """Object chains ``x_0, ..., x_length`` with every consecutive hom nonzero."""
    out = [(x,) for x in range(C.n_objects)]
    for _ in range(length):
        out = [ch + (y,) for ch in out for y in range(C.n_objects) if C.hom(ch[-1], y)]
    return out


@dataclass(eq=False)
class TreeComponent:
    """The space ``A-hat_T`` with its frame basis and constraint subspace ``A_T``."""

    data: ComplexData
    tree: TwoTree
    frames: list[Frame]
    frame_index: dict[Frame, int]
    slot_dims: list[tuple[int, ...]]
    out_dims: list[int]
    offsets: list[int]
    hat_dim: int
    _constraint: Subspace | None = None

    def bottom(self, frame: Frame) -> int:
        return word_object(self.data.C, right_nested([ch[0] for ch in frame]))

    def top(self, frame: Frame) -> int:
        return word_object(self.data.C, right_nested([ch[-1] for ch in frame]))

    def inputs(self, f: int) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(d) for d in self.slot_dims[f]))

    def index(self, f: int, inputs: Sequence[int], out: int) -> int:
        r = 0
        for b, d in zip(inputs, self.slot_dims[f]):
            r = r * d + b
        return self.offsets[f] + r * self.out_dims[f] + out

    def coordinates(self) -> Iterator[tuple[int, tuple[int, ...], int]]:
        for f in range(len(self.frames)):
            for inp in self.inputs(f):
                for o in range(self.out_dims[f]):
                    yield f, inp, o

    @property
    def constraint(self) -> Subspace:
        if self._constraint is None:
            self._constraint = constraint_subspace(self.data, self)
        return self._constraint

    @property
    def dim(self) -> int:
        return self.constraint.dim

    def __repr__(self) -> str:
        return f"TreeComponent({self.tree}, frames={len(self.frames)}, hat_dim={self.hat_dim})"


@dataclass
class Cochain:
    tree: TwoTree
    coordinates: list[Any]
    constrained: bool = False


def build_component(data: ComplexData, tree: TwoTree) -> TreeComponent:
    C, D, F = data.C, data.D, data.F
    per_col = [_chains(C, h) for h in tree.heights]
    frames: list[Frame] = [tuple(fr) for fr in itertools.product(*per_col)]
    slot_dims, out_dims, offsets = [], [], []
    total = 0
    for fr in frames:
        dims = tuple(C.hom(ch[a - 1], ch[a]) for ch in fr for a in range(1, len(ch)))
        bot = word_object(C, right_nested([ch[0] for ch in fr]))
        top = word_object(C, right_nested([ch[-1] for ch in fr]))
        od = D.hom(F.obj(bot), F.obj(top))
        n_in = 1
        for d in dims:
            n_in *= d
        slot_dims.append(dims)
        out_dims.append(od)
        offsets.append(total)
        total += n_in * od
    return TreeComponent(
        data, tree, frames, {fr: i for i, fr in enumerate(frames)}, slot_dims, out_dims, offsets, total
    )


def hat_dimension_formula(data: ComplexData, tree: TwoTree) -> int:
    """Independent count: sum over frames of prod(slot dims) * output dim."""
    C, D, F = data.C, data.D, data.F
    total = 0
    for fr in itertools.product(*(_chains(C, h) for h in tree.heights)):
        prod = 1
        for ch in fr:
            for a in range(1, len(ch)):
                prod *= C.hom(ch[a - 1], ch[a])
        bot = word_object(C, right_nested([ch[0] for ch in fr]))
        top = word_object(C, right_nested([ch[-1] for ch in fr]))
        total += prod * D.hom(F.obj(bot), F.obj(top))
    return total


# ---------------------------------------------------------------------------
# Morphism helpers


def _expand(K: Field, vectors: Sequence[Sequence[Any]]) -> list[tuple[tuple[int, ...], Any]]:
    """Multilinear expansion of a tuple of coordinate vectors into basis tuples."""
    terms: list[tuple[tuple[int, ...], Any]] = [((), K.one)]
    for vec in vectors:
        nz = [(i, c) for i, c in enumerate(vec) if not K.is_zero(c)]
        terms = [(t + (i,), K.mul(coef, c)) for t, coef in terms for i, c in nz]
        if not terms:
            return []
    return terms


def _vertical(C: FinMonCat, chain: Sequence[int], basis: Sequence[int], lo: int, hi: int) -> Morphism:
    """Composite of the slot morphisms ``lo+1..hi`` of a column: ``X_lo -> X_hi``."""
    if hi == lo:
        return C.id(chain[lo])
    out = C.basis(chain[lo], chain[lo + 1], basis[lo])
    for a in range(lo + 2, hi + 1):
        out = C.comp(C.basis(chain[a - 1], chain[a], basis[a - 1]), out)
    return out


def _tensor_word(C: FinMonCat, items: Sequence[Morphism | None]) -> Morphism:
    """Right-nested tensor of morphisms; ``None`` entries are identities of the unit."""
    ms = [C.id(C.unit) if m is None else m for m in items]
    if not ms:
        return C.id(C.unit)
    if len(ms) == 1:
        return ms[0]
    out = ms[-1]
    for m in reversed(ms[:-1]):
        out = C.tensor(m, out)
    return out


def _group_word(leaves: Sequence[int]) -> TensorWord:
    return right_nested(list(leaves))


def _j_constraint(data: ComplexData, a: int, b: int, c: int) -> Morphism:
    """``F(a (b c)) -> Fa (Fb Fc)`` built from the functor constraints."""
    D, F = data.D, data.F
    if F.is_identity:
        return D.id(data.C.t(a, data.C.t(b, c)))
    return D.comp(D.wl(F.obj(a), F.phi(b, c)), F.phi(a, data.C.t(b, c)))


def _j_inverse(data: ComplexData, a: int, b: int, c: int) -> Morphism:
    D, F = data.D, data.F
    if F.is_identity:
        return D.id(data.C.t(a, data.C.t(b, c)))
    return D.comp(F.phi_inv(a, data.C.t(b, c)), D.wl(F.obj(a), F.phi_inv(b, c)))


# ---------------------------------------------------------------------------
# The action


def act_map(
    data: ComplexData,
    phi: Theta2Map,
    src: TreeComponent | None = None,
    tgt: TreeComponent | None = None,
    rng: random.Random | None = None,
) -> ExactMatrix:
    """Matrix of ``phi_*: A-hat_S -> A-hat_T`` in the frame bases.

    ``rng`` randomizes the rewriting order inside every canonical isomorphism;
    the result must not depend on it.
    """
    key = phi
    if rng is None and key in data._actions:
        return data._actions[key]
    src = src or data.component(phi.source)
    tgt = tgt or data.component(phi.target)
    if src.tree != phi.source or tgt.tree != phi.target:
        raise ValueError("component trees do not match the map")
    M = _build_action(data, phi, src, tgt, rng)
    if rng is None:
        data._actions[key] = M
    return M


def act_generator(
    data: ComplexData, gen: Theta2Map, src: TreeComponent | None = None, tgt: TreeComponent | None = None
) -> ExactMatrix:
    return act_map(data, gen, src, tgt)


def _build_action(
    data: ComplexData, phi: Theta2Map, src: TreeComponent, tgt: TreeComponent, rng: random.Random | None
) -> ExactMatrix:
    C, D, F = data.C, data.D, data.F
    K = data.field
    Fm = (lambda m: m) if F.is_identity else F
    S, T = phi.source, phi.target
    kS, kT = S.k, T.k
    lo_col, hi_col = phi.phi(0), phi.phi(kS)
    ranges = [tuple(range(phi.phi(i - 1) + 1, phi.phi(i) + 1)) for i in range(1, kS + 1)]
    # column maps as value tuples: comps[i-1] = ((j, values), ...)
    comps = [tuple((j, phi.component(i, j).values) for j in ranges[i - 1]) for i in range(1, kS + 1)]
    s_heights = S.heights
    t_heights = T.heights
    min_cols = tuple(range(1, lo_col + 1))
    max_cols = tuple(range(hi_col + 1, kT + 1))
    t_offsets = [sum(t_heights[: j - 1]) for j in range(1, kT + 1)]
    entries: dict[int, dict[int, Any]] = {}

    def side_word(X: Frame, cols: Sequence[int], top: bool) -> TensorWord:
        return right_nested([X[j - 1][t_heights[j - 1] if top else 0] for j in cols]) if cols else None

    def mid_word(X: Frame, top: bool) -> TensorWord:
        if not kS:
            return None
        return right_nested([right_nested([X[j - 1][t_heights[j - 1] if top else 0] for j in r]) for r in ranges])

    for tf, X in enumerate(tgt.frames):
        if tgt.out_dims[tf] == 0:
            continue
        Y = tuple(
            tuple(
                word_object(C, right_nested([X[j - 1][vals[a]] for j, vals in comps[i]]))
                for a in range(s_heights[i] + 1)
            )
            for i in range(kS)
        )
        sf = src.frame_index.get(Y)
        if sf is None:
            continue
        s_out = src.out_dims[sf]
        if s_out == 0:
            continue
        W_bot = (side_word(X, min_cols, False), (mid_word(X, False), side_word(X, max_cols, False)))
        W_top = (side_word(X, min_cols, True), (mid_word(X, True), side_word(X, max_cols, True)))
        bot_T = right_nested([ch[0] for ch in X])
        top_T = right_nested([ch[-1] for ch in X])
        pre = Fm(coherence_iso(C, bot_T, W_bot, rng))
        post = Fm(coherence_iso(C, W_top, top_T, rng))
        if not F.is_identity:
            a_lo, b_lo, c_lo = (word_object(C, w) for w in (W_bot[0], W_bot[1][0], W_bot[1][1]))
            a_hi, b_hi, c_hi = (word_object(C, w) for w in (W_top[0], W_top[1][0], W_top[1][1]))
            pre = D.comp(_j_constraint(data, a_lo, b_lo, c_lo), pre)
            post = D.comp(post, _j_inverse(data, a_hi, b_hi, c_hi))
        s_frame = src.frames[sf]
        s_bot = F.obj(src.bottom(s_frame))
        s_top = F.obj(src.top(s_frame))
        basis_out = [D.basis(s_bot, s_top, o) for o in range(s_out)]
        f_unit = D.id(F.obj(C.unit))

        for tin in tgt.inputs(tf):
            per_col = [tin[t_offsets[j] : t_offsets[j] + t_heights[j]] for j in range(kT)]
            vectors = []
            lower_parts, upper_parts = [], []
            for i in range(kS):
                h = s_heights[i]
                for a in range(1, h + 1):
                    parts = [_vertical(C, X[j - 1], per_col[j - 1], vals[a - 1], vals[a]) for j, vals in comps[i]]
                    vectors.append(_tensor_word(C, parts).vec)
                if comps[i]:
                    lower_parts.append(
                        _tensor_word(C, [_vertical(C, X[j - 1], per_col[j - 1], 0, vals[0]) for j, vals in comps[i]])
                    )
                    upper_parts.append(
                        _tensor_word(
                            C,
                            [_vertical(C, X[j - 1], per_col[j - 1], vals[h], t_heights[j - 1]) for j, vals in comps[i]],
                        )
                    )
                else:
                    lower_parts.append(None)
                    upper_parts.append(None)
            expansion = _expand(K, vectors)
            if not expansion:
                continue
            full_min = (
                Fm(_tensor_word(C, [_vertical(C, X[j - 1], per_col[j - 1], 0, t_heights[j - 1]) for j in min_cols]))
                if min_cols
                else f_unit
            )
            full_max = (
                Fm(_tensor_word(C, [_vertical(C, X[j - 1], per_col[j - 1], 0, t_heights[j - 1]) for j in max_cols]))
                if max_cols
                else f_unit
            )
            lower = Fm(_tensor_word(C, lower_parts))
            upper = Fm(_tensor_word(C, upper_parts))
            images = []
            for om in basis_out:
                middle = D.comp(upper, D.comp(om, lower))
                whole = D.tensor(full_min, D.tensor(middle, full_max))
                images.append(D.comp(post, D.comp(whole, pre)).vec)
            for sin, coef in expansion:
                for o in range(s_out):
                    col = src.index(sf, sin, o)
                    for o2, v in enumerate(images[o]):
                        if K.is_zero(v):
                            continue
                        row = tgt.index(tf, tin, o2)
                        r = entries.setdefault(row, {})
                        val = K.mul(coef, v)
                        r[col] = K.add(r[col], val) if col in r else val
    for r in entries.values():
        for c in [c for c, v in r.items() if K.is_zero(v)]:
            del r[c]
    return ExactMatrix(K, tgt.hat_dim, src.hat_dim, {i: r for i, r in entries.items() if r})


# ---------------------------------------------------------------------------
# Constraint subspace


def structure_is_scalar(C: FinMonCat) -> bool:
    """True when every associator and unitor is a scalar multiple of the identity."""
    K = C.field

    def scalar(m: Morphism) -> bool:
        ident = C.id(m.src).vec
        piv = next((i for i, v in enumerate(ident) if not K.is_zero(v)), None)
        if piv is None:
            return True
        c = K.div(m.vec[piv], ident[piv])
        return all(K.is_zero(K.sub(a, K.mul(c, b))) for a, b in zip(m.vec, ident))

    objs = range(C.n_objects)
    return (
        all(scalar(C.alpha(x, y, z)) for x, y, z in itertools.product(objs, repeat=3))
        and all(scalar(C.lam(x)) and scalar(C.rho_(x)) for x in objs)
    )


def _eval_rows(
    comp: TreeComponent,
    f: int,
    vectors: Sequence[Sequence[Any]],
    post: Morphism | None,
    pre: Morphism | None,
) -> list[dict[int, Any]]:
    """For each output basis index ``q`` of the frame, the functional ``Psi |-> (post o Psi(vectors) o pre)_q``."""
    data = comp.data
    D = data.D
    K = data.field
    fr = comp.frames[f]
    bot, top = data.F.obj(comp.bottom(fr)), data.F.obj(comp.top(fr))
    nout = comp.out_dims[f]
    rows: list[dict[int, Any]] = [dict() for _ in range(nout)]
    images = []
    for o in range(nout):
        m = D.basis(bot, top, o)
        if post is not None:
            m = D.comp(post, m)
        if pre is not None:
            m = D.comp(m, pre)
        images.append(m.vec)
    for inp, coef in _expand(K, vectors):
        for o in range(nout):
            col = comp.index(f, inp, o)
            for q, v in enumerate(images[o]):
                if K.is_zero(v):
                    continue
                val = K.mul(coef, v)
                rows[q][col] = K.add(rows[q][col], val) if col in rows[q] else val
    return rows


def _splits(C: FinMonCat, x: int, kind: str) -> list[tuple[int, ...]]:
    objs = range(C.n_objects)
    if kind == "assoc":
        return [(u, v, w) for u in objs for v in objs for w in objs if C.t(u, C.t(v, w)) == x]
    return [(x,)]


def constraint_equations(data: ComplexData, comp: TreeComponent) -> Iterator[dict[int, Any]]:
    """Rows of the linear system cutting ``A_T`` out of ``A-hat_T``.

    Associator conditions move ``alpha`` across each cut of a column whose chain is
    split as ``u (v w)``; unit conditions do the same with ``lambda`` (split
    ``e x``) and ``rho`` (split ``x e``).  Cuts at the ends of a column move the
    structure map onto the output, whiskered at that column.
    """
    C, F = data.C, data.F
    K = data.field
    tree = comp.tree
    for f, fr in enumerate(comp.frames):
        if comp.out_dims[f] == 0:
            continue
        for j in range(1, tree.k + 1):
            chain = fr[j - 1]
            n = len(chain) - 1
            other_slots = [(jj, a) for jj in range(1, tree.k + 1) for a in range(1, tree.height(jj) + 1) if jj != j]
            for kind in ("assoc", "lambda", "rho"):
                split_choices = _split_chains(C, chain, kind)
                for splits in split_choices:
                    for basis_choice in _split_basis(C, splits):
                        minus = [_split_morphism(C, splits, basis_choice, a, kind, "minus") for a in range(1, n + 1)]
                        plus = [_split_morphism(C, splits, basis_choice, a, kind, "plus") for a in range(1, n + 1)]
                        struct = [_structure(C, splits[s], kind) for s in range(n + 1)]
                        for others in itertools.product(*(range(C.hom(fr[jj - 1][a - 1], fr[jj - 1][a])) for jj, a in other_slots)):
                            fixed = {sl: C.basis(fr[sl[0] - 1][sl[1] - 1], fr[sl[0] - 1][sl[1]], b).vec for sl, b in zip(other_slots, others)}

                            def assemble(col_inputs: Sequence[Morphism]) -> list:
                                vecs = []
                                for jj in range(1, tree.k + 1):
                                    for a in range(1, tree.height(jj) + 1):
                                        vecs.append(col_inputs[a - 1].vec if jj == j else fixed[(jj, a)])
                                return vecs

                            def whiskered(level: str, s: int) -> Morphism:
                                leaves = [ch[0] if level == "bot" else ch[-1] for ch in fr]
                                w = right_nested(leaves)
                                return F(_whisker_leaf(C, w, j, struct[s]))

                            for c in range(0, n + 1):
                                if n == 0:
                                    lhs = _eval_rows(comp, f, assemble([]), whiskered("top", 0), None)
                                    rhs = _eval_rows(comp, f, assemble([]), None, whiskered("bot", 0))
                                elif 1 <= c <= n - 1:
                                    left = minus[: c - 1] + [C.comp(struct[c], minus[c - 1])] + plus[c:]
                                    right = minus[:c] + [C.comp(plus[c], struct[c])] + plus[c + 1 :]
                                    lhs = _eval_rows(comp, f, assemble(left), None, None)
                                    rhs = _eval_rows(comp, f, assemble(right), None, None)
                                elif c == 0:
                                    left = [C.comp(plus[0], struct[0])] + plus[1:]
                                    lhs = _eval_rows(comp, f, assemble(left), None, None)
                                    rhs = _eval_rows(comp, f, assemble(plus), None, whiskered("bot", 0))
                                else:
                                    left = minus[:-1] + [C.comp(struct[n], minus[-1])]
                                    lhs = _eval_rows(comp, f, assemble(left), None, None)
                                    rhs = _eval_rows(comp, f, assemble(minus), whiskered("top", n), None)
                                for rl, rr in zip(lhs, rhs):
                                    row = dict(rl)
                                    for col, v in rr.items():
                                        row[col] = K.sub(row[col], v) if col in row else K.neg(v)
                                    row = {k: v for k, v in row.items() if not K.is_zero(v)}
                                    if row:
                                        yield row
                                if n == 0:
                                    break


def _split_chains(C: FinMonCat, chain: Sequence[int], kind: str) -> list[tuple[tuple[int, ...], ...]]:
    """Factor each object of the chain according to ``kind`` with nonzero factor homs."""
    options = [_splits(C, x, kind) for x in chain]
    out = []
    for combo in itertools.product(*options):
        if kind == "assoc":
            ok = all(
                all(C.hom(combo[s - 1][r], combo[s][r]) for r in range(3)) for s in range(1, len(combo))
            )
        else:
            ok = True
        if ok:
            out.append(tuple(combo))
    return out


def _split_basis(C: FinMonCat, splits: Sequence[tuple[int, ...]]) -> Iterator[tuple]:
    n = len(splits) - 1
    factors = []
    for s in range(1, n + 1):
        prev, cur = splits[s - 1], splits[s]
        factors.append(list(itertools.product(*(range(C.hom(prev[r], cur[r])) for r in range(len(cur))))))
    return itertools.product(*factors)


def _split_morphism(C: FinMonCat, splits: Sequence[tuple[int, ...]], basis: tuple, a: int, kind: str, form: str) -> Morphism:
    """Slot ``a`` input built from split factors: ``u (v w)`` (minus) or ``(u v) w`` (plus)."""
    prev, cur = splits[a - 1], splits[a]
    ms = [C.basis(prev[r], cur[r], basis[a - 1][r]) for r in range(len(cur))]
    if kind == "assoc":
        if form == "minus":
            return C.tensor(ms[0], C.tensor(ms[1], ms[2]))
        return C.tensor(C.tensor(ms[0], ms[1]), ms[2])
    if kind == "lambda":
        return C.wl(C.unit, ms[0]) if form == "minus" else ms[0]
    return C.wr(ms[0], C.unit) if form == "minus" else ms[0]


def _structure(C: FinMonCat, split: tuple[int, ...], kind: str) -> Morphism:
    if kind == "assoc":
        return C.alpha(*split)
    if kind == "lambda":
        return C.lam(split[0])
    return C.rho_(split[0])


def _whisker_leaf(C: FinMonCat, w: TensorWord, j: int, m: Morphism) -> Morphism:
    """Identity on every leaf of ``w`` except the ``j``-th, where ``m`` acts."""
    counter = [0]

    def go(node: TensorWord) -> Morphism:
        if isinstance(node, tuple):
            left, right = go(node[0]), go(node[1])
            return C.tensor(left, right)
        if node is None:
            return C.id(C.unit)
        counter[0] += 1
        return m if counter[0] == j else C.id(node)

    return go(w)


def constraint_subspace(data: ComplexData, comp: TreeComponent, force_equations: bool = False) -> Subspace:
    """``A_T`` as the joint kernel of the constraint equations.

    When all structure isomorphisms are scalar the equations vanish identically and
    the full space is returned without generating them (unless ``force_equations``).
    """
    K = data.field
    if not force_equations and structure_is_scalar(data.C):
        return Subspace.full(K, comp.hat_dim)
    rows = list(constraint_equations(data, comp))
    if not rows:
        return Subspace.full(K, comp.hat_dim)
    M = ExactMatrix(K, len(rows), comp.hat_dim, dict(enumerate(rows)))
    return kernel_basis(M)


# ---------------------------------------------------------------------------
# Normalized cochains


def identity_evaluations(comp: TreeComponent) -> Iterator[dict[int, Any]]:
    """Functionals ``Psi |-> Psi(..., id, ...)_q`` for every slot able to carry an identity."""
    C = comp.data.C
    for f, fr in enumerate(comp.frames):
        slots = [(j, a) for j in range(1, comp.tree.k + 1) for a in range(1, comp.tree.height(j) + 1)]
        for s, (j, a) in enumerate(slots):
            x, y = fr[j - 1][a - 1], fr[j - 1][a]
            if x != y:
                continue
            idv = C.id(x).vec
            others = [range(d) if t != s else [None] for t, d in enumerate(comp.slot_dims[f])]
            for choice in itertools.product(*others):
                vecs = []
                for t, b in enumerate(choice):
                    sj, sa = slots[t]
                    vecs.append(idv if t == s else C.basis(fr[sj - 1][sa - 1], fr[sj - 1][sa], b).vec)
                for row in _eval_rows(comp, f, vecs, None, None):
                    if row:
                        yield row


def normalized_subspace(data: ComplexData, tree: TwoTree) -> Subspace:
    """Cochains vanishing as soon as one slot carries an identity, intersected with ``A_T``."""
    comp = data.component(tree)
    K = data.field
    rows = list(identity_evaluations(comp))
    if not rows:
        return comp.constraint
    M = ExactMatrix(K, len(rows), comp.hat_dim, dict(enumerate(rows)))
    ker = kernel_basis(M)
    if comp.constraint.dim == comp.hat_dim:
        return ker
    return intersect(ker, comp.constraint)


def intersect(U: Subspace, V: Subspace) -> Subspace:
    """``U cap V`` via the kernel of ``[U | -V]``."""
    K = U.field
    n = U.ambient
    M = ExactMatrix(K, n, U.dim + V.dim)
    M.add_block(0, 0, U.basis)
    M.add_block(0, U.dim, V.basis, sign=-1)
    ker = kernel_basis(M)
    vecs = [U.basis.apply(v[: U.dim]) for v in ker.vectors()]
    return Subspace.span(K, n, vecs)


def is_normalized(data: ComplexData, psi: Cochain) -> bool:
    comp = data.component(psi.tree)
    K = data.field
    for row in identity_evaluations(comp):
        acc = K.zero
        for col, v in row.items():
            acc = K.add(acc, K.mul(v, psi.coordinates[col]))
        if not K.is_zero(acc):
            return False
    return True


# ---------------------------------------------------------------------------
# Relations lifted to matrices


def side_matrix(data: ComplexData, source: TwoTree, side: Sequence[Theta2Map]) -> ExactMatrix:
    """The induced matrix of a composite ``side[0] o side[1] o ...``; empty means identity."""
    if not side:
        return ExactMatrix.identity(data.field, data.component(source).hat_dim)
    M = act_map(data, side[-1])
    for g in reversed(side[:-1]):
        M = act_map(data, g) @ M
    return M


def relation_holds(data: ComplexData, rel: Relation) -> bool:
    return side_matrix(data, rel.source, rel.lhs) == side_matrix(data, rel.source, rel.rhs)


def relation_sweep(data: ComplexData, relations: Sequence[Relation]) -> dict[str, dict[str, int]]:
    """Per relation family: instances, Theta_2 failures and matrix failures."""
    out: dict[str, dict[str, int]] = {}
    for rel in relations:
        r = out.setdefault(rel.name, {"instances": 0, "theta2_failures": 0, "matrix_failures": 0})
        r["instances"] += 1
        if not rel.holds():
            r["theta2_failures"] += 1
        if not relation_holds(data, rel):
            r["matrix_failures"] += 1
    return dict(sorted(out.items()))
