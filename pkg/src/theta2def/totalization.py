"""Totalization of the Theta_2 complex, its normalized and Davydov-Yetter pieces, and the
relative totalization along the column-count projection with its cosimplicial monoid structure."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Any, Callable, Sequence

from .cochain import (
    ComplexData,
    _eval_rows,
    _whisker_leaf,
    act_map,
    intersect,
    normalized_subspace,
)
from .exactfield import (
    ExactMatrix,
    LinAlgError,
    Subspace,
    cohomology_representatives,
    kernel_basis,
    rank,
    restrict,
)
from .moncat import right_nested
from .theta2 import (
    DeltaMap,
    Theta2Map,
    TwoTree,
    all_delta_maps,
    all_shuffles,
    boundary_terms,
    d_max,
    d_min,
    delta_codegeneracy,
    delta_coface,
    delta_compose,
    delta_identity,
    enumerate_trees,
    horizontal_codeg,
    linking_number,
    shuffle_coface,
)


class DifferentialError(LinAlgError):
    """``d o d != 0`` or a differential leaving its subcomplex."""


# ---------------------------------------------------------------------------
# Block-structured complexes


@dataclass
class Block:
    tree: TwoTree
    offset: int
    space: Subspace  # inside A-hat_T

    @property
    def dim(self) -> int:
        return self.space.dim


@dataclass
class GradedSpace:
    """Direct sum of tree blocks, each a subspace of its ``A-hat_T``."""

    blocks: list[Block]

    @property
    def dim(self) -> int:
        return sum(b.dim for b in self.blocks)

    def index(self) -> dict[TwoTree, Block]:
        return {b.tree: b for b in self.blocks}


def _graded(data: ComplexData, trees: Sequence[TwoTree], space: Callable[[TwoTree], Subspace]) -> GradedSpace:
    blocks, off = [], 0
    for t in trees:
        sp = space(t)
        blocks.append(Block(t, off, sp))
        off += sp.dim
    return GradedSpace(blocks)


def _block_matrix(
    data: ComplexData,
    src: GradedSpace,
    tgt: GradedSpace,
    terms: Callable[[TwoTree], Sequence[tuple[int, Theta2Map]]],
) -> ExactMatrix:
    """Assemble ``sum sign * phi_*`` between graded spaces; ``terms(T)`` lists maps into ``T``."""
    K = data.field
    M = ExactMatrix(K, tgt.dim, src.dim)
    sidx = src.index()
    for tb in tgt.blocks:
        if tb.dim == 0:
            continue
        full_T = tb.dim == data.component(tb.tree).hat_dim
        by_source: dict[TwoTree, ExactMatrix] = {}
        for sign, phi in terms(tb.tree):
            sb = sidx.get(phi.source)
            if sb is None or sb.dim == 0:
                continue
            A = act_map(data, phi)
            acc = by_source.get(sb.tree)
            if acc is None:
                acc = by_source[sb.tree] = ExactMatrix(K, A.nrows, A.ncols)
            acc.add_block(0, 0, A, sign=sign)
        for tree, A in by_source.items():
            sb = sidx[tree]
            if sb.dim != data.component(tree).hat_dim:
                A = A @ sb.space.basis
            if not full_T:
                A = restrict(A, Subspace.full(K, A.ncols), tb.space)
            M.add_block(tb.offset, sb.offset, A)
    return M


def _check_square(d_in: ExactMatrix, d_out: ExactMatrix, where: str) -> None:
    first = (d_out @ d_in).first_nonzero()
    if first is not None:
        raise DifferentialError(f"d^2 != 0 {where}: first nonzero entry {first[:2]} = {first[2]}")


def _tot_terms(tree: TwoTree) -> list[tuple[int, Theta2Map]]:
    return [(bt.sign, bt.map) for bt in boundary_terms(tree)]


# ---------------------------------------------------------------------------
# Absolute totalization


@dataclass
class TotComplex:
    data: ComplexData
    max_degree: int
    spaces: list[GradedSpace]
    differentials: list[ExactMatrix]  # d_l : degree l -> degree l+1, l < max_degree
    normalized: bool = False

    def dims(self) -> list[int]:
        return [s.dim for s in self.spaces]

    def block(self, degree: int, tree: TwoTree) -> Block:
        return self.spaces[degree].index()[tree]

    def d_in(self, n: int) -> ExactMatrix:
        if n == 0:
            return ExactMatrix(self.data.field, self.spaces[0].dim, 0)
        return self.differentials[n - 1]


def _space_for(data: ComplexData, normalized: bool) -> Callable[[TwoTree], Subspace]:
    if normalized:
        return lambda t: normalized_subspace(data, t)
    return lambda t: data.component(t).constraint


def build_tot(data: ComplexData, N: int, normalized: bool = False, check: bool = True) -> TotComplex:
    """Components up to degree ``N`` and differentials ``d_0 .. d_{N-1}``; verifies ``d^2 = 0``."""
    if N < 0:
        raise ValueError("max degree must be nonnegative")
    space = _space_for(data, normalized)
    spaces = [_graded(data, enumerate_trees(l), space) for l in range(N + 1)]
    ds = [_block_matrix(data, spaces[l], spaces[l + 1], _tot_terms) for l in range(N)]
    if check:
        for l in range(N - 1):
            _check_square(ds[l], ds[l + 1], f"at degree {l}")
    return TotComplex(data, N, spaces, ds, normalized)


def normalized_tot(data: ComplexData, N: int) -> TotComplex:
    return build_tot(data, N, normalized=True)


def cohomology(tot: TotComplex, n: int) -> tuple[int, list[list[Any]]]:
    """Dimension and cocycle representatives of ``H^n``; needs ``n < max_degree``."""
    if not 0 <= n < tot.max_degree:
        raise ValueError(f"H^{n} needs the complex built to degree {n + 1} (built: {tot.max_degree})")
    reps = cohomology_representatives(tot.d_in(n), tot.differentials[n])
    return len(reps), reps


def cohomology_dims(tot: TotComplex) -> list[int]:
    out = []
    for n in range(tot.max_degree):
        d_out = tot.differentials[n]
        d_in = tot.d_in(n)
        out.append(d_out.ncols - rank(d_out) - rank(d_in))
    return out


def compare_normalized(data: ComplexData, N: int) -> dict:
    full = build_tot(data, N)
    norm = normalized_tot(data, N)
    hf, hn = cohomology_dims(full), cohomology_dims(norm)
    return {
        "full_dims": full.dims(),
        "normalized_dims": norm.dims(),
        "H_full": hf,
        "H_normalized": hn,
        "agree": hf == hn,
    }


def modification_kernel(data: ComplexData) -> Subspace:
    """Degree-0 cocycles of the totalization, inside ``D(F e, F e)``."""
    tot = build_tot(data, 1)
    return kernel_basis(tot.differentials[0])


def modification_solutions(data: ComplexData) -> Subspace:
    """Direct solutions of ``F(X) Psi = Psi F(X)`` (unitors stripped) for every object ``X``."""
    C, D, F = data.C, data.D, data.F
    K = data.field
    E = F.obj(C.unit)
    nb = D.hom(E, E)
    phi0 = F.phi0()
    rows: list[dict[int, Any]] = []
    for x in range(C.n_objects):
        Fx = F.obj(x)
        r = D.comp(D.rho_(Fx), D.wl(Fx, phi0))
        l = D.comp(D.lam(Fx), D.wr(phi0, Fx))
        r_inv, l_inv = D.inverse(r), D.inverse(l)
        images = []
        for b in range(nb):
            psi = D.basis(E, E, b)
            lhs = D.comp_all(r, D.wl(Fx, psi), r_inv)
            rhs = D.comp_all(l, D.wr(psi, Fx), l_inv)
            images.append(D.sub(lhs, rhs).vec)
        for q in range(D.hom(Fx, Fx)):
            row = {b: images[b][q] for b in range(nb) if not K.is_zero(images[b][q])}
            if row:
                rows.append(row)
    return kernel_basis(ExactMatrix(K, len(rows), nb, dict(enumerate(rows))))


# ---------------------------------------------------------------------------
# Davydov-Yetter row


def row0_tree(n: int) -> TwoTree:
    return TwoTree((0,) * n)


def _require_row0_data(data: ComplexData) -> None:
    if data.G is not data.F:
        raise ValueError("DY extraction needs G = F")


def naturality_equations(data: ComplexData, n: int) -> list[dict[int, Any]]:
    """Rows ``Psi(X') o F(f_i) - F(f_i) o Psi(X)`` for every argument ``i`` and basis ``f``."""
    C, F = data.C, data.F
    K = data.field
    comp = data.component(row0_tree(n))
    rows: list[dict[int, Any]] = []
    for fi, X in enumerate(comp.frames):
        xs = [ch[0] for ch in X]
        for i in range(n):
            for y in range(C.n_objects):
                for b in range(C.hom(xs[i], y)):
                    f = C.basis(xs[i], y, b)
                    X2 = tuple((y,) if j == i else X[j] for j in range(n))
                    fi2 = comp.frame_index[X2]
                    wf = F(_whisker_leaf(C, right_nested(xs), i + 1, f))
                    lhs = _eval_rows(comp, fi2, [], None, wf)
                    rhs = _eval_rows(comp, fi, [], wf, None)
                    for rl, rr in zip(lhs, rhs):
                        row = dict(rl)
                        for c, v in rr.items():
                            row[c] = K.sub(row[c], v) if c in row else K.neg(v)
                        row = {c: v for c, v in row.items() if not K.is_zero(v)}
                        if row:
                            rows.append(row)
    return rows


@dataclass
class SubComplex:
    """Subspaces ``V_n`` of the row-0 blocks with the horizontal differential restricted."""

    spaces: list[Subspace]
    differentials: list[ExactMatrix]  # in the bases of the V_n

    def dims(self) -> list[int]:
        return [v.dim for v in self.spaces]

    def cohomology_dims(self) -> list[int]:
        out = []
        K = self.spaces[0].field
        for n in range(len(self.differentials)):
            d_out = self.differentials[n]
            d_in = self.differentials[n - 1] if n else ExactMatrix(K, self.spaces[0].dim, 0)
            out.append(d_out.ncols - rank(d_out) - rank(d_in))
        return out


def _row0_d0(data: ComplexData, n: int) -> ExactMatrix:
    """Horizontal differential ``A-hat_([n];0..) -> A-hat_([n+1];0..)``."""
    S, T = row0_tree(n), row0_tree(n + 1)
    K = data.field
    M = ExactMatrix(K, data.component(T).hat_dim, data.component(S).hat_dim)
    for bt in boundary_terms(T):
        if bt.map.source == S:
            M.add_block(0, 0, act_map(data, bt.map), sign=bt.sign)
    return M


def _row0_d1(data: ComplexData, n: int) -> ExactMatrix:
    """Vertical differential from row 0 into row 1, over all row-1 trees with ``n`` columns."""
    S = row0_tree(n)
    K = data.field
    targets = [TwoTree(tuple(1 if j == p else 0 for j in range(n))) for p in range(n)]
    rows = sum(data.component(t).hat_dim for t in targets)
    M = ExactMatrix(K, rows, data.component(S).hat_dim)
    off = 0
    for T in targets:
        for bt in boundary_terms(T):
            if bt.map.source == S:
                M.add_block(off, 0, act_map(data, bt.map), sign=bt.sign)
        off += data.component(T).hat_dim
    return M


def _subcomplex(data: ComplexData, spaces: list[Subspace]) -> SubComplex:
    ds = []
    for n in range(len(spaces) - 1):
        ds.append(restrict(_row0_d0(data, n), spaces[n], spaces[n + 1]))
    for n in range(len(ds) - 1):
        _check_square(ds[n], ds[n + 1], f"on the DY row at degree {n}")
    return SubComplex(spaces, ds)


def dy_complex(data: ComplexData, N: int) -> SubComplex:
    """Row-0 cochains natural in every argument, degrees ``0..N``."""
    _require_row0_data(data)
    K = data.field
    spaces = []
    for n in range(N + 1):
        comp = data.component(row0_tree(n))
        rows = naturality_equations(data, n)
        V = kernel_basis(ExactMatrix(K, len(rows), comp.hat_dim, dict(enumerate(rows))))
        if comp.constraint.dim != comp.hat_dim:
            V = intersect(V, comp.constraint)
        spaces.append(V)
    return _subcomplex(data, spaces)


def dy_row0_kernel(data: ComplexData, N: int) -> SubComplex:
    """``ker d_1`` on row 0 with the horizontal differential, degrees ``0..N``."""
    _require_row0_data(data)
    spaces = []
    for n in range(N + 1):
        comp = data.component(row0_tree(n))
        V = kernel_basis(_row0_d1(data, n)) if n else Subspace.full(data.field, comp.hat_dim)
        if comp.constraint.dim != comp.hat_dim:
            V = intersect(V, comp.constraint)
        spaces.append(V)
    return _subcomplex(data, spaces)


# ---------------------------------------------------------------------------
# Relative totalization


def column_trees(n: int, ell: int) -> list[TwoTree]:
    """Trees with ``n`` columns and total height ``ell`` (vertical degree)."""
    return [t for t in enumerate_trees(n + ell) if t.k == n]


def vertical_terms(tree: TwoTree) -> list[tuple[int, Theta2Map]]:
    return [(bt.sign, bt.map) for bt in boundary_terms(tree) if bt.kind == "vertical"]


def coface_terms(n: int, i: int) -> Callable[[TwoTree], list[tuple[int, Theta2Map]]]:
    """Signed Theta_2 maps making up ``Omega^i: Rp[n] -> Rp[n+1]``, listed by target tree.

    ``Omega^0 = D_min``, ``Omega^p`` (``1 <= p <= n``) the shuffle sum with sign
    ``(-1)^(K<p + a + #sigma)`` and ``Omega^(n+1) = (-1)^K D_max``; ``K`` counts source heights.
    """

    def terms(T: TwoTree) -> list[tuple[int, Theta2Map]]:
        hs = T.heights
        if i == 0:
            return [(1, d_min(TwoTree(hs[1:])))] if hs and hs[0] == 0 else []
        if i == n + 1:
            if hs and hs[-1] == 0:
                src = TwoTree(hs[:-1])
                return [((-1) ** sum(src.heights), d_max(src))]
            return []
        a, b = hs[i - 1], hs[i]
        src = TwoTree(hs[: i - 1] + (a + b,) + hs[i + 1 :])
        left = sum(hs[: i - 1])
        return [((-1) ** (left + a + s.sign_exponent), shuffle_coface(src, i, s)) for s in all_shuffles(a, b)]

    return terms


def codegeneracy_terms(n: int, q: int) -> Callable[[TwoTree], list[tuple[int, Theta2Map]]]:
    """``Upsilon^q: Rp[n] -> Rp[n-1]``: deletes the height-0 column ``q+1`` with sign ``(-1)^(K<=q)``."""

    def terms(T: TwoTree) -> list[tuple[int, Theta2Map]]:
        hs = T.heights
        src = TwoTree(hs[:q] + (0,) + hs[q:])
        return [((-1) ** sum(hs[:q]), horizontal_codeg(src, q))]

    return terms


@dataclass
class RelTot:
    """``Rp[n]`` for ``n <= n_max`` in vertical degrees ``0..ell_max``."""

    data: ComplexData
    n_max: int
    ell_max: int
    spaces: dict[tuple[int, int], GradedSpace]
    vertical: dict[tuple[int, int], ExactMatrix] = dc_field(default_factory=dict)
    _ops: dict = dc_field(default_factory=dict, repr=False)

    def space(self, n: int, ell: int) -> GradedSpace:
        key = (n, ell)
        if key not in self.spaces:
            space = _space_for(self.data, False)
            self.spaces[key] = _graded(self.data, column_trees(n, ell), space)
        return self.spaces[key]

    def d(self, n: int, ell: int) -> ExactMatrix:
        key = (n, ell)
        if key not in self.vertical:
            self.vertical[key] = _block_matrix(self.data, self.space(n, ell), self.space(n, ell + 1), vertical_terms)
        return self.vertical[key]

    def coface(self, n: int, i: int, ell: int) -> ExactMatrix:
        """``Omega^i: Rp[n]^ell -> Rp[n+1]^ell``."""
        key = ("O", n, i, ell)
        if key not in self._ops:
            if not 0 <= i <= n + 1:
                raise ValueError(f"coface index {i} out of range 0..{n + 1}")
            self._ops[key] = _block_matrix(self.data, self.space(n, ell), self.space(n + 1, ell), coface_terms(n, i))
        return self._ops[key]

    def codegeneracy(self, n: int, q: int, ell: int) -> ExactMatrix:
        """``Upsilon^q: Rp[n]^ell -> Rp[n-1]^ell``."""
        key = ("U", n, q, ell)
        if key not in self._ops:
            if not 0 <= q <= n - 1:
                raise ValueError(f"codegeneracy index {q} out of range 0..{n - 1}")
            self._ops[key] = _block_matrix(
                self.data, self.space(n, ell), self.space(n - 1, ell), codegeneracy_terms(n, q)
            )
        return self._ops[key]

    def delta_action(self, f: DeltaMap, ell: int) -> ExactMatrix:
        """``X(f): Rp[f.source]^ell -> Rp[f.target]^ell`` via the epi-mono factorization."""
        M = ExactMatrix.identity(self.data.field, self.space(f.source, ell).dim)
        n = f.source
        for kind, idx in delta_factorization(f):
            if kind == "s":
                M = self.codegeneracy(n, idx, ell) @ M
                n -= 1
            else:
                M = self.coface(n, idx, ell) @ M
                n += 1
        return M


def build_reltot(data: ComplexData, n_max: int, ell_max: int) -> RelTot:
    """Builds and checks the vertical differentials ``Rp[n]^ell -> Rp[n]^(ell+1)`` for ``ell < ell_max``."""
    rel = RelTot(data, n_max, ell_max, {})
    for n in range(n_max + 1):
        for ell in range(ell_max - 1):
            _check_square(rel.d(n, ell), rel.d(n, ell + 1), f"vertically at n={n}, degree {ell}")
    return rel


def delta_factorization(f: DeltaMap) -> list[tuple[str, int]]:
    """Elementary factors in application order: codegeneracies ``s^j`` then cofaces ``d^i``."""
    vals = f.values
    steps: list[tuple[str, int]] = []
    # surjection onto the image, highest repeats first
    repeats = [j for j in range(f.source) if vals[j] == vals[j + 1]]
    for j in reversed(repeats):
        steps.append(("s", j))
    image = sorted(set(vals))
    missing = [i for i in range(f.target + 1) if i not in image]
    for i in missing:
        steps.append(("d", i))
    # sanity: recompose
    g = delta_identity(f.source)
    n = f.source
    for kind, idx in steps:
        if kind == "s":
            g = delta_compose(delta_codegeneracy(n, idx), g)
            n -= 1
        else:
            g = delta_compose(delta_coface(n, idx), g)
            n += 1
    if g != f:
        raise AssertionError(f"factorization of {f} recomposed to {g}")
    return steps


# ---------------------------------------------------------------------------
# Cosimplicial checks


@dataclass
class CheckReport:
    checked: int = 0
    failures: list[str] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, ok: bool, label: str) -> None:
        self.checked += 1
        if not ok:
            self.failures.append(label)

    def as_dict(self) -> dict:
        return {"checked": self.checked, "passed": self.passed, "failures": self.failures[:20]}


def cosimplicial_check(rel: RelTot, n_max: int | None = None, ell_max: int | None = None) -> CheckReport:
    """Cosimplicial identities and (anti)commutation with the vertical differential."""
    n_max = rel.n_max if n_max is None else n_max
    ell_max = rel.ell_max if ell_max is None else ell_max
    K = rel.data.field
    rep = CheckReport()
    for ell in range(ell_max + 1):
        for n in range(n_max + 1):
            # Omega^q Omega^p = Omega^p Omega^(q-1), p < q, on Rp[n]
            for q in range(n + 3):
                for p in range(q):
                    if q - 1 > n + 1:
                        continue
                    lhs = rel.coface(n + 1, q, ell) @ rel.coface(n, p, ell)
                    rhs = rel.coface(n + 1, p, ell) @ rel.coface(n, q - 1, ell)
                    rep.record(lhs == rhs, f"coface-coface n={n} p={p} q={q} ell={ell}")
            # Upsilon^q Upsilon^p = Upsilon^p Upsilon^(q+1), p <= q, on Rp[n]
            for p in range(n - 1):
                for q in range(p, n - 1):
                    lhs = rel.codegeneracy(n - 1, q, ell) @ rel.codegeneracy(n, p, ell)
                    rhs = rel.codegeneracy(n - 1, p, ell) @ rel.codegeneracy(n, q + 1, ell)
                    rep.record(lhs == rhs, f"codeg-codeg n={n} p={p} q={q} ell={ell}")
            # Upsilon^j Omega^i on Rp[n] (Omega into Rp[n+1], Upsilon back to Rp[n])
            for j in range(n + 1):
                for i in range(n + 2):
                    lhs = rel.codegeneracy(n + 1, j, ell) @ rel.coface(n, i, ell)
                    if i < j:
                        rhs = rel.coface(n - 1, i, ell) @ rel.codegeneracy(n, j - 1, ell)
                    elif i in (j, j + 1):
                        rhs = ExactMatrix.identity(K, rel.space(n, ell).dim)
                    else:
                        rhs = rel.coface(n - 1, i - 1, ell) @ rel.codegeneracy(n, j, ell)
                    rep.record(lhs == rhs, f"codeg-coface n={n} i={i} j={j} ell={ell}")
            if ell < ell_max:
                for i in range(n + 2):
                    lhs = rel.d(n + 1, ell) @ rel.coface(n, i, ell)
                    rhs = rel.coface(n, i, ell + 1) @ rel.d(n, ell)
                    rep.record((lhs + rhs).is_zero(), f"coface anticommutes with d n={n} i={i} ell={ell}")
                for q in range(n):
                    lhs = rel.d(n - 1, ell) @ rel.codegeneracy(n, q, ell)
                    rhs = rel.codegeneracy(n, q, ell + 1) @ rel.d(n, ell)
                    rep.record((lhs + rhs).is_zero(), f"codeg anticommutes with d n={n} q={q} ell={ell}")
    return rep


def moore_differential(rel: RelTot, degree: int) -> tuple[ExactMatrix, list[tuple[int, int]]]:
    """``D = sum_i (-1)^i Omega^i + d`` on ``(+)_{n+ell=degree} Rp[n]^ell``; returns the matrix and block order."""
    K = rel.data.field
    src_blocks = [(n, degree - n) for n in range(degree + 1)]
    tgt_blocks = [(n, degree + 1 - n) for n in range(degree + 2)]
    s_off, t_off = {}, {}
    acc = 0
    for b in src_blocks:
        s_off[b] = acc
        acc += rel.space(*b).dim
    s_dim = acc
    acc = 0
    for b in tgt_blocks:
        t_off[b] = acc
        acc += rel.space(*b).dim
    M = ExactMatrix(K, acc, s_dim)
    for n, ell in src_blocks:
        for i in range(n + 2):
            M.add_block(t_off[(n + 1, ell)], s_off[(n, ell)], rel.coface(n, i, ell), sign=(-1) ** i)
        M.add_block(t_off[(n, ell + 1)], s_off[(n, ell)], rel.d(n, ell))
    return M, src_blocks


def transitivity_check(data: ComplexData, N: int) -> CheckReport:
    """The block identification ``A_T -> Rp[k_T]^(dim T - k_T)`` matches Tot entry by entry."""
    tot = build_tot(data, N)
    rel = RelTot(data, N, N, {})
    rep = CheckReport()
    for deg in range(N):
        D, _ = moore_differential(rel, deg)
        perm_src = _identification(tot.spaces[deg], rel, deg)
        perm_tgt = _identification(tot.spaces[deg + 1], rel, deg + 1)
        if perm_src is None or perm_tgt is None:
            rep.record(False, f"index bijection fails at degree {deg}")
            continue
        d = tot.differentials[deg]
        ok = True
        for i in range(d.nrows):
            for j in range(d.ncols):
                if d.get(i, j) != D.get(perm_tgt[i], perm_src[j]):
                    rep.record(False, f"degree {deg}: entry ({i},{j}) Tot={d.get(i, j)} Moore={D.get(perm_tgt[i], perm_src[j])}")
                    ok = False
                    break
            if not ok:
                break
        if ok:
            rep.record(True, f"degree {deg}")
    return rep


def _identification(gs: GradedSpace, rel: RelTot, degree: int) -> list[int] | None:
    """Tot index -> Moore index, or None if the blocks do not biject."""
    offsets, acc = {}, 0
    for n in range(degree + 1):
        sp = rel.space(n, degree - n)
        for b in sp.blocks:
            offsets[b.tree] = (acc + b.offset, b.dim)
        acc += sp.dim
    if acc != gs.dim:
        return None
    perm = []
    for b in gs.blocks:
        if b.tree not in offsets or offsets[b.tree][1] != b.dim:
            return None
        start = offsets[b.tree][0]
        perm.extend(range(start, start + b.dim))
    if sorted(perm) != list(range(acc)):
        return None
    return perm


# ---------------------------------------------------------------------------
# Monoid structure


def product_block(data: ComplexData, A: TwoTree, B: TwoTree) -> ExactMatrix:
    """Bilinear product ``A-hat_A x A-hat_B -> A-hat_(A+B)`` as a matrix on the tensor basis.

    Column ``i * dim_B + j`` is the product of basis vectors ``e_i`` (in A) and ``f_j`` (in B):
    ``B`` eats the lower ``B``-heights of every column, ``A`` the upper ones, and the outputs
    compose vertically.
    """
    if A.k != B.k:
        raise ValueError("product needs the same column count")
    D, F = data.D, data.F
    K = data.field
    T = TwoTree(tuple(a + b for a, b in zip(A.heights, B.heights)))
    ca, cb, ct = data.component(A), data.component(B), data.component(T)
    M = ExactMatrix(K, ct.hat_dim, ca.hat_dim * cb.hat_dim)
    for tf, X in enumerate(ct.frames):
        lower = tuple(ch[: B.height(p + 1) + 1] for p, ch in enumerate(X))
        upper = tuple(ch[B.height(p + 1) :] for p, ch in enumerate(X))
        fb, fa = cb.frame_index.get(lower), ca.frame_index.get(upper)
        if fb is None or fa is None:
            continue
        bot = F.obj(cb.bottom(lower))
        mid = F.obj(cb.top(lower))
        top = F.obj(ca.top(upper))
        for tin in ct.inputs(tf):
            pos, bin_, ain = 0, [], []
            for p in range(A.k):
                hb, ha = B.height(p + 1), A.height(p + 1)
                bin_.extend(tin[pos : pos + hb])
                ain.extend(tin[pos + hb : pos + hb + ha])
                pos += ha + hb
            for ob in range(cb.out_dims[fb]):
                mb = D.basis(bot, mid, ob)
                j = cb.index(fb, bin_, ob)
                for oa in range(ca.out_dims[fa]):
                    i = ca.index(fa, ain, oa)
                    v = D.comp(D.basis(mid, top, oa), mb).vec
                    for q, c in enumerate(v):
                        if not K.is_zero(c):
                            M.data.setdefault(ct.index(tf, tin, q), {})[i * cb.hat_dim + j] = c
    return M


def monoid_product(data: ComplexData, a: tuple[TwoTree, Sequence[Any]], b: tuple[TwoTree, Sequence[Any]]) -> tuple[TwoTree, list[Any]]:
    """Product of homogeneous elements given as ``(tree, A-hat coordinates)``."""
    (A, va), (B, vb) = a, b
    M = product_block(data, A, B)
    K = data.field
    nb = len(vb)
    vec = [K.zero] * M.ncols
    for i, x in enumerate(va):
        if K.is_zero(x):
            continue
        for j, y in enumerate(vb):
            if not K.is_zero(y):
                vec[i * nb + j] = K.mul(x, y)
    return TwoTree(tuple(p + q for p, q in zip(A.heights, B.heights))), M.apply(vec)


def unit_element(data: ComplexData, n: int) -> tuple[TwoTree, list[Any]]:
    """The unit of ``Rp[n]``: identity values on the height-0 tree with ``n`` columns."""
    comp = data.component(row0_tree(n))
    K = data.field
    vec = [K.zero] * comp.hat_dim
    for f, X in enumerate(comp.frames):
        obj = data.F.obj(comp.bottom(X))
        idv = data.D.id(obj).vec
        for q, c in enumerate(idv):
            vec[comp.index(f, (), q)] = c
    return row0_tree(n), vec


@dataclass
class CommutativityReport:
    lk_bound: int
    m_bound: int
    pairs: int = 0
    failures: list[dict] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {
            "lk_bound": self.lk_bound,
            "m_bound": self.m_bound,
            "pairs": self.pairs,
            "passed": self.passed,
            "first_failure": self.failures[0] if self.failures else None,
            "failures": len(self.failures),
        }


def _lift(rel: RelTot, n: int, ell: int) -> ExactMatrix:
    """Constrained ``Rp[n]^ell`` coordinates -> ``A-hat`` coordinates of the same blocks."""
    gs = rel.space(n, ell)
    K = rel.data.field
    hat = sum(rel.data.component(b.tree).hat_dim for b in gs.blocks)
    L = ExactMatrix(K, hat, gs.dim)
    off = 0
    for b in gs.blocks:
        L.add_block(off, b.offset, b.space.basis)
        off += rel.data.component(b.tree).hat_dim
    return L


def _hat_offsets(rel: RelTot, n: int, ell: int) -> dict[TwoTree, int]:
    out, off = {}, 0
    for b in rel.space(n, ell).blocks:
        out[b.tree] = off
        off += rel.data.component(b.tree).hat_dim
    return out


def rp_product_matrix(rel: RelTot, n: int, i: int, j: int) -> ExactMatrix:
    """Product ``Rp[n]^i x Rp[n]^j -> Rp[n]^(i+j)`` in ``A-hat`` coordinates on the tensor basis."""
    key = ("P", n, i, j)
    if key in rel._ops:
        return rel._ops[key]
    K = rel.data.field
    oi, oj, ot = _hat_offsets(rel, n, i), _hat_offsets(rel, n, j), _hat_offsets(rel, n, i + j)
    dim = lambda offs: sum(rel.data.component(t).hat_dim for t in offs)
    di, dj, dt = dim(oi), dim(oj), dim(ot)
    P = ExactMatrix(K, dt, di * dj)
    for A, a0 in oi.items():
        for B, b0 in oj.items():
            M = product_block(rel.data, A, B)
            T = TwoTree(tuple(x + y for x, y in zip(A.heights, B.heights)))
            nb = rel.data.component(B).hat_dim
            for r, row in M.data.items():
                tgt = P.data.setdefault(ot[T] + r, {})
                for c, v in row.items():
                    col = (a0 + c // nb) * dj + b0 + c % nb
                    tgt[col] = K.add(tgt[col], v) if col in tgt else v
    rel._ops[key] = P
    return P


def _kron(X: ExactMatrix, Y: ExactMatrix) -> ExactMatrix:
    K = X.field
    out = ExactMatrix(K, X.nrows * Y.nrows, X.ncols * Y.ncols)
    for r1, row1 in X.data.items():
        for r2, row2 in Y.data.items():
            tgt = out.data.setdefault(r1 * Y.nrows + r2, {})
            for c1, v1 in row1.items():
                for c2, v2 in row2.items():
                    tgt[c1 * Y.ncols + c2] = K.mul(v1, v2)
    return out


def _swap_columns(M: ExactMatrix, p: int, q: int) -> ExactMatrix:
    """Reindex columns ``a*q + b -> b*p + a``."""
    out = ExactMatrix(M.field, M.nrows, M.ncols)
    for r, row in M.data.items():
        out.data[r] = {(c % q) * p + c // q: v for c, v in row.items()}
    return out


def _image(rel: RelTot, f: DeltaMap, ell: int) -> ExactMatrix:
    key = ("X", f, ell)
    if key not in rel._ops:
        rel._ops[key] = _lift(rel, f.target, ell) @ rel.delta_action(f, ell)
    return rel._ops[key]


def commutativity_check(
    data: ComplexData, lk_bound: int = 1, m_bound: int = 3, ell_max: int = 1, exact_lk: bool = False
) -> CommutativityReport:
    """Test ``X(tau)(a) X(pi)(b) = X(pi)(b) X(tau)(a)`` for all pairs with ``lk(tau, pi) <= lk_bound``.

    ``a, b`` run over bases of ``Rp[p]^i`` and ``Rp[q]^j`` with ``i, j <= ell_max``.  With
    ``exact_lk`` only pairs of linking number exactly ``lk_bound`` are tested.
    """
    rel = RelTot(data, m_bound, ell_max, {})
    rep = CommutativityReport(lk_bound, m_bound)
    for m in range(m_bound + 1):
        for p in range(m + 1):
            for q in range(m + 1):
                for tau in all_delta_maps(p, m):
                    for pi in all_delta_maps(q, m):
                        lk = linking_number(tau, pi)
                        if lk > lk_bound or (exact_lk and lk != lk_bound):
                            continue
                        rep.pairs += 1
                        bad = _first_noncommuting(rel, tau, pi, ell_max)
                        if bad is not None:
                            rep.failures.append({"tau": list(tau.values), "pi": list(pi.values), "m": m, "lk": lk, **bad})
    return rep


def _first_noncommuting(rel: RelTot, tau: DeltaMap, pi: DeltaMap, ell_max: int) -> dict | None:
    m = tau.target
    for i in range(ell_max + 1):
        Xt = _image(rel, tau, i)
        for j in range(ell_max + 1):
            Xp = _image(rel, pi, j)
            left = rp_product_matrix(rel, m, i, j) @ _kron(Xt, Xp)
            right = rp_product_matrix(rel, m, j, i) @ _kron(Xp, Xt)
            right = _swap_columns(right, Xp.ncols, Xt.ncols)
            diff = (left - right).first_nonzero()
            if diff is not None:
                r, c, _ = diff
                return {"degrees": [i, j], "basis": [c // Xp.ncols, c % Xp.ncols], "row": r}
    return None
