"""Objects and morphisms of Theta_2 in the wreath-product model Delta wr Delta.

A tree ``([k]; [n_1, ..., n_k])`` is stored as its tuple of column heights.
Columns are numbered 1..k in every public constructor, matching the usual
notation for the elementary generators.  Maps compose as ``compose(g, f) = g o f``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence


class Theta2Error(ValueError):
    """Raised on malformed trees, maps or out-of-range generator indices."""


@dataclass(frozen=True, order=True)
class TwoTree:
    """The object ``([k]; [n_1, ..., n_k])`` of Theta_2."""

    heights: tuple[int, ...]

    def __init__(self, heights: Sequence[int] = ()) -> None:
        hs = tuple(int(h) for h in heights)
        if any(h < 0 for h in hs):
            raise Theta2Error(f"negative column height in {hs}")
        object.__setattr__(self, "heights", hs)

    @property
    def k(self) -> int:
        return len(self.heights)

    @property
    def dim(self) -> int:
        return self.k + sum(self.heights)

    def height(self, p: int) -> int:
        """Height of column ``p`` (1-based)."""
        return self.heights[p - 1]

    def __repr__(self) -> str:
        return f"([{self.k}];{list(self.heights)})"


def dimension(tree: TwoTree) -> int:
    return tree.dim


def enumerate_trees(d: int) -> list[TwoTree]:
    """All trees of dimension ``d``: ``k`` ascending, then heights lexicographic."""
    out: list[TwoTree] = []
    for k in range(0, d + 1):
        rest = d - k
        if k == 0:
            if rest == 0:
                out.append(TwoTree(()))
            continue
        for hs in _compositions(rest, k):
            out.append(TwoTree(hs))
    return out


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions of ``total`` into ``parts`` summands, lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for tail in _compositions(total - first, parts - 1):
            yield (first,) + tail


# ---------------------------------------------------------------------------
# Delta


@dataclass(frozen=True, order=True)
class DeltaMap:
    """A weakly monotone map ``[source] -> [target]``."""

    source: int
    target: int
    values: tuple[int, ...]

    def __init__(self, source: int, target: int, values: Sequence[int]) -> None:
        vals = tuple(values)
        if len(vals) != source + 1:
            raise Theta2Error(f"DeltaMap [{source}]->[{target}] needs {source + 1} values, got {vals}")
        prev = 0
        for v in vals:
            if v < prev or v > target:
                raise Theta2Error(f"DeltaMap values {vals} not monotone in [0,{target}]")
            prev = v
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "values", vals)

    def __call__(self, i: int) -> int:
        return self.values[i]

    def image(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.values)))

    def is_injective(self) -> bool:
        return len(set(self.values)) == len(self.values)

    def is_surjective(self) -> bool:
        return len(set(self.values)) == self.target + 1

    def __repr__(self) -> str:
        return f"[{self.source}]->[{self.target}]{list(self.values)}"


@lru_cache(maxsize=None)
def delta_identity(n: int) -> DeltaMap:
    return DeltaMap(n, n, range(n + 1))


def delta_compose(g: DeltaMap, f: DeltaMap) -> DeltaMap:
    if f.target != g.source:
        raise Theta2Error(f"cannot compose {g} after {f}")
    return DeltaMap(f.source, g.target, [g(v) for v in f.values])


@lru_cache(maxsize=None)
def delta_coface(n: int, i: int) -> DeltaMap:
    """``d^i: [n] -> [n+1]`` skipping ``i``."""
    if not 0 <= i <= n + 1:
        raise Theta2Error(f"coface index {i} out of range for [{n}]")
    return DeltaMap(n, n + 1, [v if v < i else v + 1 for v in range(n + 1)])


@lru_cache(maxsize=None)
def delta_codegeneracy(n: int, j: int) -> DeltaMap:
    """``s^j: [n] -> [n-1]`` hitting ``j`` twice."""
    if not 0 <= j <= n - 1:
        raise Theta2Error(f"codegeneracy index {j} out of range for [{n}]")
    return DeltaMap(n, n - 1, [v if v <= j else v - 1 for v in range(n + 1)])


def all_delta_maps(n: int, m: int) -> list[DeltaMap]:
    return [DeltaMap(n, m, c) for c in itertools.combinations_with_replacement(range(m + 1), n + 1)]


# ---------------------------------------------------------------------------
# Shuffles


@dataclass(frozen=True, order=True)
class Shuffle:
    """An ``(a, b)``-shuffle stored as a word over ``L`` (first block) and ``R``."""

    word: tuple[str, ...]

    def __init__(self, word: Sequence[str] | str) -> None:
        w = tuple(word)
        if any(c not in ("L", "R") for c in w):
            raise Theta2Error(f"shuffle word {w!r} must use only L and R")
        object.__setattr__(self, "word", w)

    @property
    def a(self) -> int:
        return self.word.count("L")

    @property
    def b(self) -> int:
        return self.word.count("R")

    @property
    def sign_exponent(self) -> int:
        """Number of (R, L) inversions."""
        seen_r = 0
        inv = 0
        for c in self.word:
            if c == "R":
                seen_r += 1
            else:
                inv += seen_r
        return inv

    def dual_pair(self) -> tuple[DeltaMap, DeltaMap]:
        """The Joyal-dual pair ``(p*, q*)`` from ``[a+b]`` onto ``[a]`` and ``[b]``."""
        n = len(self.word)
        p = [0]
        q = [0]
        for c in self.word:
            p.append(p[-1] + (c == "L"))
            q.append(q[-1] + (c == "R"))
        return DeltaMap(n, self.a, p), DeltaMap(n, self.b, q)

    def __repr__(self) -> str:
        return "".join(self.word) or "()"


def all_shuffles(a: int, b: int) -> list[Shuffle]:
    out = []
    for pos in itertools.combinations(range(a + b), a):
        w = ["R"] * (a + b)
        for i in pos:
            w[i] = "L"
        out.append(Shuffle(w))
    return out


# ---------------------------------------------------------------------------
# Theta_2 maps


@dataclass(frozen=True, order=True)
class Theta2Map:
    """A morphism ``(phi; phi_i^j)`` of Theta_2.

    ``column_maps[i-1]`` lists the maps ``[n_i] -> [m_j]`` for the target columns
    ``j = phi(i-1)+1, ..., phi(i)``.
    """

    source: TwoTree
    target: TwoTree
    phi: DeltaMap
    column_maps: tuple[tuple[DeltaMap, ...], ...]

    def __post_init__(self) -> None:
        s, t, phi = self.source, self.target, self.phi
        if phi.source != s.k or phi.target != t.k:
            raise Theta2Error(f"phi {phi} does not map [{s.k}] to [{t.k}]")
        if len(self.column_maps) != s.k:
            raise Theta2Error("one tuple of column maps per source column is required")
        for i in range(1, s.k + 1):
            maps = self.column_maps[i - 1]
            targets = range(phi(i - 1) + 1, phi(i) + 1)
            if len(maps) != len(targets):
                raise Theta2Error(f"column {i}: expected {len(targets)} maps, got {len(maps)}")
            for j, f in zip(targets, maps):
                if f.source != s.height(i) or f.target != t.height(j):
                    raise Theta2Error(f"column {i}->{j}: map {f} has wrong shape")

    def component(self, i: int, j: int) -> DeltaMap:
        """The map ``phi_i^j`` (1-based indices)."""
        return self.column_maps[i - 1][j - self.phi(i - 1) - 1]

    def __repr__(self) -> str:
        cols = ";".join(",".join(repr(f) for f in c) for c in self.column_maps)
        return f"<{self.source}->{self.target} phi={list(self.phi.values)} {cols}>"


@lru_cache(maxsize=None)
def identity(tree: TwoTree) -> Theta2Map:
    return Theta2Map(tree, tree, delta_identity(tree.k), tuple((delta_identity(h),) for h in tree.heights))


@lru_cache(maxsize=1 << 16)
def compose(g: Theta2Map, f: Theta2Map) -> Theta2Map:
    """The wreath composite ``g o f``."""
    if f.target != g.source:
        raise Theta2Error(f"cannot compose: target {f.target} != source {g.source}")
    phi = delta_compose(g.phi, f.phi)
    cols = []
    for i in range(1, f.source.k + 1):
        maps = []
        for j in range(f.phi(i - 1) + 1, f.phi(i) + 1):
            fij = f.component(i, j)
            for l in range(g.phi(j - 1) + 1, g.phi(j) + 1):
                maps.append(delta_compose(g.component(j, l), fij))
        cols.append(tuple(maps))
    return Theta2Map(f.source, g.target, phi, tuple(cols))


def all_maps(source: TwoTree, target: TwoTree) -> list[Theta2Map]:
    """The full hom-set ``Theta_2(source, target)`` (small trees only)."""
    out = []
    for phi in all_delta_maps(source.k, target.k):
        choices = []
        for i in range(1, source.k + 1):
            ranges = [all_delta_maps(source.height(i), target.height(j)) for j in range(phi(i - 1) + 1, phi(i) + 1)]
            choices.append(list(itertools.product(*ranges)))
        for cols in itertools.product(*choices):
            out.append(Theta2Map(source, target, phi, tuple(cols)))
    return out


# ---------------------------------------------------------------------------
# Elementary generators (all take the source tree)


def _check_column(tree: TwoTree, p: int) -> None:
    if not 1 <= p <= tree.k:
        raise Theta2Error(f"column {p} out of range for {tree}")


def _replace_column(tree: TwoTree, p: int, new: Sequence[int]) -> TwoTree:
    hs = tree.heights
    return TwoTree(hs[: p - 1] + tuple(new) + hs[p:])


@lru_cache(maxsize=None)
def vertical_coface(tree: TwoTree, p: int, j: int) -> Theta2Map:
    """``d_p^j``: raise column ``p`` by the coface ``d^j``, ``0 <= j <= n_p + 1``."""
    _check_column(tree, p)
    n = tree.height(p)
    face = delta_coface(n, j)
    target = _replace_column(tree, p, [n + 1])
    cols = tuple((face if i == p else delta_identity(h),) for i, h in enumerate(tree.heights, start=1))
    return Theta2Map(tree, target, delta_identity(tree.k), cols)


@lru_cache(maxsize=None)
def vertical_codeg(tree: TwoTree, p: int, j: int) -> Theta2Map:
    """``eps_p^j``: lower column ``p`` by the codegeneracy ``s^j``."""
    _check_column(tree, p)
    n = tree.height(p)
    degen = delta_codegeneracy(n, j)
    target = _replace_column(tree, p, [n - 1])
    cols = tuple((degen if i == p else delta_identity(h),) for i, h in enumerate(tree.heights, start=1))
    return Theta2Map(tree, target, delta_identity(tree.k), cols)


@lru_cache(maxsize=None)
def shuffle_coface(tree: TwoTree, p: int, sigma: Shuffle) -> Theta2Map:
    """``D_{p,sigma}``: split column ``p`` (height ``a+b``) into columns of heights ``a``, ``b``."""
    _check_column(tree, p)
    if len(sigma.word) != tree.height(p):
        raise Theta2Error(f"shuffle {sigma} has length {len(sigma.word)}, column {p} has height {tree.height(p)}")
    target = _replace_column(tree, p, [sigma.a, sigma.b])
    pstar, qstar = sigma.dual_pair()
    cols = tuple(((pstar, qstar) if i == p else (delta_identity(h),)) for i, h in enumerate(tree.heights, start=1))
    return Theta2Map(tree, target, delta_coface(tree.k, p), cols)


@lru_cache(maxsize=None)
def d_min(tree: TwoTree) -> Theta2Map:
    """``D_min``: prepend a height-0 column; ``phi = d^0``."""
    target = TwoTree((0,) + tree.heights)
    cols = tuple((delta_identity(h),) for h in tree.heights)
    return Theta2Map(tree, target, delta_coface(tree.k, 0), cols)


@lru_cache(maxsize=None)
def d_max(tree: TwoTree) -> Theta2Map:
    """``D_max``: append a height-0 column; ``phi = d^{k+1}``."""
    target = TwoTree(tree.heights + (0,))
    cols = tuple((delta_identity(h),) for h in tree.heights)
    return Theta2Map(tree, target, delta_coface(tree.k, tree.k + 1), cols)


@lru_cache(maxsize=None)
def horizontal_codeg(tree: TwoTree, p: int) -> Theta2Map:
    """``Upsilon^p``: ``phi = s^p`` deletes column ``p+1``, ``0 <= p <= k-1``.

    The map has codimension 1 exactly when column ``p+1`` has height 0.
    """
    if not 0 <= p <= tree.k - 1:
        raise Theta2Error(f"horizontal codegeneracy index {p} out of range for {tree}")
    target = TwoTree(tree.heights[:p] + tree.heights[p + 1 :])
    cols = tuple(() if i == p + 1 else (delta_identity(h),) for i, h in enumerate(tree.heights, start=1))
    return Theta2Map(tree, target, delta_codegeneracy(tree.k, p), cols)


# ---------------------------------------------------------------------------
# Signed boundary


@dataclass(frozen=True)
class BoundaryTerm:
    sign: int
    kind: str
    map: Theta2Map


def boundary_terms(tree: TwoTree) -> list[BoundaryTerm]:
    """All codimension-1 cofaces ``S -> tree`` with their differential signs.

    With ``K<p`` the sum of the source heights left of column ``p`` and ``n`` the
    source column count the signs are: vertical ``(-1)^(K<p + p + j)``, shuffle
    ``(-1)^(K<p + a + p + #sigma)``, ``D_min`` +1, ``D_max`` ``(-1)^(K + n + 1)``.
    """
    return list(_boundary_terms(tree))


@lru_cache(maxsize=None)
def _boundary_terms(tree: TwoTree) -> tuple[BoundaryTerm, ...]:
    out: list[BoundaryTerm] = []
    hs = tree.heights
    k = tree.k
    if k and hs[0] == 0:
        out.append(BoundaryTerm(1, "dmin", d_min(TwoTree(hs[1:]))))
    for p in range(1, k + 1):
        left = sum(hs[: p - 1])
        m = hs[p - 1]
        if m >= 1:
            src = _replace_column(tree, p, [m - 1])
            for j in range(m + 1):
                out.append(BoundaryTerm((-1) ** (left + p + j), "vertical", vertical_coface(src, p, j)))
        if p < k:
            a, b = m, hs[p]
            src = TwoTree(hs[: p - 1] + (a + b,) + hs[p + 1 :])
            for sigma in all_shuffles(a, b):
                sign = (-1) ** (left + a + p + sigma.sign_exponent)
                out.append(BoundaryTerm(sign, "shuffle", shuffle_coface(src, p, sigma)))
    if k and hs[-1] == 0:
        src = TwoTree(hs[:-1])
        out.append(BoundaryTerm((-1) ** (sum(src.heights) + src.k + 1), "dmax", d_max(src)))
    return tuple(out)


def boundary_squared(tree: TwoTree) -> dict[Theta2Map, int]:
    """Signed multiset of codimension-2 composites into ``tree``; zero entries dropped."""
    acc: dict[Theta2Map, int] = {}
    for outer in boundary_terms(tree):
        for inner in boundary_terms(outer.map.source):
            key = compose(outer.map, inner.map)
            acc[key] = acc.get(key, 0) + outer.sign * inner.sign
    return {key: c for key, c in acc.items() if c}


# ---------------------------------------------------------------------------
# Reedy factorization


def is_minus(f: Theta2Map) -> bool:
    """``phi`` surjective and every column map surjective."""
    return f.phi.is_surjective() and all(g.is_surjective() for col in f.column_maps for g in col)


def is_plus(f: Theta2Map) -> bool:
    """``phi`` injective and each column family jointly injective."""
    if not f.phi.is_injective():
        return False
    for i, col in enumerate(f.column_maps, start=1):
        points = {tuple(g(x) for g in col) for x in range(f.source.height(i) + 1)}
        if len(points) != f.source.height(i) + 1:
            return False
    return True


def reedy_factor(f: Theta2Map) -> tuple[Theta2Map, Theta2Map]:
    """Return ``(plus, minus)`` with ``f = plus o minus``."""
    s, t = f.source, f.target
    kept = [i for i in range(1, s.k + 1) if f.phi(i) > f.phi(i - 1)]
    # phi^- : [k_s] -> [len(kept)] counts kept columns at or before each boundary.
    phi_minus = DeltaMap(s.k, len(kept), [sum(1 for i in kept if i <= x) for x in range(s.k + 1)])
    mid_heights = []
    minus_cols: list[tuple[DeltaMap, ...]] = []
    plus_cols: list[tuple[DeltaMap, ...]] = []
    for i in range(1, s.k + 1):
        col = f.column_maps[i - 1]
        if i not in kept:
            minus_cols.append(())
            continue
        points = sorted({tuple(g(x) for g in col) for x in range(s.height(i) + 1)})
        r = len(points) - 1
        mid_heights.append(r)
        rank = {pt: idx for idx, pt in enumerate(points)}
        minus_cols.append((DeltaMap(s.height(i), r, [rank[tuple(g(x) for g in col)] for x in range(s.height(i) + 1)]),))
        plus_cols.append(tuple(DeltaMap(r, g.target, [pt[c] for pt in points]) for c, g in enumerate(col)))
    mid = TwoTree(mid_heights)
    phi_plus = DeltaMap(len(kept), t.k, [f.phi(0)] + [f.phi(i) for i in kept])
    minus = Theta2Map(s, mid, phi_minus, tuple(minus_cols))
    plus = Theta2Map(mid, t, phi_plus, tuple(plus_cols))
    return plus, minus


# ---------------------------------------------------------------------------
# Linking number


def _runs(points: Sequence[int], cuts: int, mask: int) -> list[tuple[int, int]]:
    """Split sorted ``points`` into consecutive blocks at the positions flagged in ``mask``."""
    blocks = []
    start = 0
    for c in range(cuts):
        if mask >> c & 1:
            blocks.append((points[start], points[c]))
            start = c + 1
    blocks.append((points[start], points[-1]))
    return blocks


def _alternates(first: list[tuple[int, int]], second: list[tuple[int, int]]) -> bool:
    if not 0 <= len(first) - len(second) <= 1:
        return False
    seq = [blk for pair in itertools.zip_longest(first, second) for blk in pair if blk is not None]
    return all(seq[i][1] <= seq[i + 1][0] for i in range(len(seq) - 1))


def linking_number(tau: DeltaMap, pi: DeltaMap) -> int:
    """Minimal ``s + t - 1`` over alternating block decompositions of the two images."""
    if tau.target != pi.target:
        raise Theta2Error("linking number needs maps with a common target")
    a, b = tau.image(), pi.image()
    best = None
    for ma in range(1 << (len(a) - 1)):
        ablocks = _runs(a, len(a) - 1, ma)
        for mb in range(1 << (len(b) - 1)):
            bblocks = _runs(b, len(b) - 1, mb)
            if _alternates(ablocks, bblocks) or _alternates(bblocks, ablocks):
                n = len(ablocks) + len(bblocks) - 1
                if best is None or n < best:
                    best = n
    assert best is not None
    return best


# ---------------------------------------------------------------------------
# Relations among elementary generators


@dataclass(frozen=True)
class Relation:
    """An identity ``lhs[0] o lhs[1] o ... == rhs[0] o ...`` starting at ``source``.

    An empty side denotes the identity of ``source``.
    """

    name: str
    source: TwoTree
    lhs: tuple[Theta2Map, ...]
    rhs: tuple[Theta2Map, ...]

    def evaluate(self, side: tuple[Theta2Map, ...]) -> Theta2Map:
        result = identity(self.source)
        for g in reversed(side):
            result = compose(g, result)
        return result

    def holds(self) -> bool:
        # memoized: sweeps over several categories share one relation list
        hit = self.__dict__.get("_holds")
        if hit is None:
            hit = self.evaluate(self.lhs) == self.evaluate(self.rhs)
            object.__setattr__(self, "_holds", hit)
        return hit

    def trees(self) -> set[TwoTree]:
        out = {self.source}
        for g in self.lhs + self.rhs:
            out.add(g.source)
            out.add(g.target)
        return out


def _chain(*maps: Theta2Map) -> tuple[Theta2Map, ...]:
    """Build a composable side written in composition order from the applied-first map."""
    return tuple(maps)


def _insert(word: tuple[str, ...], pos: int, letter: str) -> Shuffle:
    return Shuffle(word[:pos] + (letter,) + word[pos:])


def _relation_instances(tree: TwoTree) -> Iterator[Relation]:
    hs = tree.heights
    k = tree.k
    cols = range(1, k + 1)

    def sh(p: int, src: TwoTree | None = None) -> list[Shuffle]:
        src = src or tree
        n = src.height(p)
        return [s for a in range(n + 1) for s in all_shuffles(a, n - a)]

    # shuffle cofaces on distant columns
    for p in cols:
        for q1 in range(p + 1, k + 1):
            for s in sh(p):
                for s2 in sh(q1):
                    f1 = shuffle_coface(tree, p, s)
                    g1 = shuffle_coface(f1.target, q1 + 1, s2)
                    f2 = shuffle_coface(tree, q1, s2)
                    g2 = shuffle_coface(f2.target, p, s)
                    yield Relation("shuffle_shuffle_far", tree, _chain(g1, f1), _chain(g2, f2))
    # shuffle cofaces splitting the same column twice
    for c in cols:
        for w in itertools.product("ABC", repeat=hs[c - 1]):
            t1 = Shuffle(["L" if x == "A" else "R" for x in w])
            t2 = Shuffle(["L" if x == "B" else "R" for x in w if x != "A"])
            r1 = Shuffle(["R" if x == "C" else "L" for x in w])
            r2 = Shuffle(["L" if x == "A" else "R" for x in w if x != "C"])
            f1 = shuffle_coface(tree, c, t1)
            f2 = shuffle_coface(tree, c, r1)
            yield Relation(
                "shuffle_shuffle_adjacent",
                tree,
                _chain(shuffle_coface(f1.target, c + 1, t2), f1),
                _chain(shuffle_coface(f2.target, c, r2), f2),
            )
    for p in cols:
        for q in cols:
            for i in range(hs[q - 1] + 2):
                fq = vertical_coface(tree, q, i)
                if p != q:
                    for j in range(hs[p - 1] + 2):
                        fp = vertical_coface(tree, p, j)
                        yield Relation(
                            "vertical_vertical_commute",
                            tree,
                            _chain(vertical_coface(fq.target, p, j), fq),
                            _chain(vertical_coface(fp.target, q, i), fp),
                        )
                else:
                    for j in range(i + 1, hs[p - 1] + 3):
                        f2 = vertical_coface(tree, p, j - 1)
                        yield Relation(
                            "vertical_vertical_same",
                            tree,
                            _chain(vertical_coface(fq.target, p, j), fq),
                            _chain(vertical_coface(f2.target, p, i), f2),
                        )
    # shuffle after vertical coface
    for p in cols:
        for j in range(hs[p - 1] + 2):
            fv = vertical_coface(tree, p, j)
            for q in cols:
                for s in sh(q, fv.target):
                    lhs = _chain(shuffle_coface(fv.target, q, s), fv)
                    if q != p:
                        fs = shuffle_coface(tree, q, s)
                        pp = p + 1 if p > q else p
                        yield Relation("shuffle_vertical", tree, lhs, _chain(vertical_coface(fs.target, pp, j), fs))
                        continue
                    w = s.word
                    around = [w[x] for x in (j - 1, j) if 0 <= x < len(w)]
                    if len(set(around)) != 1:
                        continue
                    letter = around[0]
                    drop = j if j < len(w) else j - 1
                    sbar = Shuffle(w[:drop] + w[drop + 1 :])
                    pstar, qstar = s.dual_pair()
                    fs = shuffle_coface(tree, p, sbar)
                    if letter == "L":
                        rhs = _chain(vertical_coface(fs.target, p, pstar(j)), fs)
                    else:
                        rhs = _chain(vertical_coface(fs.target, p + 1, qstar(j)), fs)
                    yield Relation("shuffle_vertical_same", tree, lhs, rhs)
    # outer cofaces against inner ones
    fmin, fmax = d_min(tree), d_max(tree)
    for p in cols:
        for i in range(hs[p - 1] + 2):
            fv = vertical_coface(tree, p, i)
            yield Relation(
                "dmin_vertical", tree, _chain(vertical_coface(fmin.target, p + 1, i), fmin), _chain(d_min(fv.target), fv)
            )
            yield Relation(
                "dmax_vertical", tree, _chain(vertical_coface(fmax.target, p, i), fmax), _chain(d_max(fv.target), fv)
            )
        for s in sh(p):
            fs = shuffle_coface(tree, p, s)
            yield Relation(
                "dmin_shuffle", tree, _chain(shuffle_coface(fmin.target, p + 1, s), fmin), _chain(d_min(fs.target), fs)
            )
            yield Relation(
                "dmax_shuffle", tree, _chain(shuffle_coface(fmax.target, p, s), fmax), _chain(d_max(fs.target), fs)
            )
    # vertical codegeneracies
    for p in cols:
        for i in range(hs[p - 1]):
            e = vertical_codeg(tree, p, i)
            for q in cols:
                if q != p:
                    for j in range(hs[q - 1]):
                        e2 = vertical_codeg(tree, q, j)
                        yield Relation(
                            "codeg_codeg_commute",
                            tree,
                            _chain(vertical_codeg(e.target, q, j), e),
                            _chain(vertical_codeg(e2.target, p, i), e2),
                        )
                for j in range(hs[q - 1] + 2):
                    if q != p:
                        fv = vertical_coface(e.target, q, j)
                        fv2 = vertical_coface(tree, q, j)
                        yield Relation(
                            "vertical_codeg_commute",
                            tree,
                            _chain(fv, e),
                            _chain(vertical_codeg(fv2.target, p, i), fv2),
                        )
            for j in range(i, hs[p - 1] - 1):
                e2 = vertical_codeg(tree, p, j + 1)
                yield Relation(
                    "codeg_codeg_same",
                    tree,
                    _chain(vertical_codeg(e.target, p, j), e),
                    _chain(vertical_codeg(e2.target, p, i), e2),
                )
            yield Relation("dmin_codeg", tree, _chain(d_min(e.target), e), _chain(vertical_codeg(fmin.target, p + 1, i), fmin))
            yield Relation("dmax_codeg", tree, _chain(d_max(e.target), e), _chain(vertical_codeg(fmax.target, p, i), fmax))
            for q in range(0, k):
                u = horizontal_codeg(e.target, q)
                lhs = _chain(u, e)
                if p > q + 1:
                    u2 = horizontal_codeg(tree, q)
                    yield Relation("hcodeg_codeg", tree, lhs, _chain(vertical_codeg(u2.target, p - 1, i), u2))
                elif p <= q:
                    u2 = horizontal_codeg(tree, q)
                    yield Relation("hcodeg_codeg", tree, lhs, _chain(vertical_codeg(u2.target, p, i), u2))
                else:
                    yield Relation("hcodeg_codeg", tree, lhs, _chain(horizontal_codeg(tree, q)))
    for p in cols:
        n = hs[p - 1]
        for i in range(n + 2):
            fv = vertical_coface(tree, p, i)
            for j in range(n + 1):
                lhs = _chain(vertical_codeg(fv.target, p, j), fv)
                if i < j:
                    e = vertical_codeg(tree, p, j - 1)
                    yield Relation("codeg_vertical_same", tree, lhs, _chain(vertical_coface(e.target, p, i), e))
                elif i in (j, j + 1):
                    yield Relation("codeg_vertical_same", tree, lhs, ())
                else:
                    e = vertical_codeg(tree, p, j)
                    yield Relation("codeg_vertical_same", tree, lhs, _chain(vertical_coface(e.target, p, i - 1), e))
            for q in range(0, k):
                lhs = _chain(horizontal_codeg(fv.target, q), fv)
                if p == q + 1:
                    yield Relation("hcodeg_vertical", tree, lhs, _chain(horizontal_codeg(tree, q)))
                else:
                    u = horizontal_codeg(tree, q)
                    pp = p - 1 if p > q + 1 else p
                    yield Relation("hcodeg_vertical", tree, lhs, _chain(vertical_coface(u.target, pp, i), u))
    # shuffle cofaces against vertical codegeneracies
    for p in cols:
        for i in range(hs[p - 1]):
            e = vertical_codeg(tree, p, i)
            for q in cols:
                for s in sh(q, e.target):
                    lhs = _chain(shuffle_coface(e.target, q, s), e)
                    if q != p:
                        fs = shuffle_coface(tree, q, s)
                        pp = p + 1 if q < p else p
                        yield Relation("shuffle_codeg", tree, lhs, _chain(vertical_codeg(fs.target, pp, i), fs))
                        continue
                    pstar, qstar = s.dual_pair()
                    for letter in ("L", "R"):
                        fs = shuffle_coface(tree, p, _insert(s.word, i, letter))
                        if letter == "L":
                            rhs = _chain(vertical_codeg(fs.target, p, pstar(i)), fs)
                        else:
                            rhs = _chain(vertical_codeg(fs.target, p + 1, qstar(i)), fs)
                        yield Relation("shuffle_codeg", tree, lhs, rhs)
    # horizontal codegeneracies
    for p in range(0, k):
        u = horizontal_codeg(tree, p)
        for q in range(p, k - 1):
            u2 = horizontal_codeg(tree, q + 1)
            yield Relation(
                "hcodeg_hcodeg", tree, _chain(horizontal_codeg(u.target, q), u), _chain(horizontal_codeg(u2.target, p), u2)
            )
    for q in range(0, k + 1):
        lhs = _chain(horizontal_codeg(fmin.target, q), fmin)
        if q == 0:
            yield Relation("hcodeg_dmin", tree, lhs, ())
        else:
            u = horizontal_codeg(tree, q - 1)
            yield Relation("hcodeg_dmin", tree, lhs, _chain(d_min(u.target), u))
        lhs = _chain(horizontal_codeg(fmax.target, q), fmax)
        if q == k:
            yield Relation("hcodeg_dmax", tree, lhs, ())
        else:
            u = horizontal_codeg(tree, q)
            yield Relation("hcodeg_dmax", tree, lhs, _chain(d_max(u.target), u))
    for p in cols:
        for s in sh(p):
            fs = shuffle_coface(tree, p, s)
            for q in range(0, k + 1):
                lhs = _chain(horizontal_codeg(fs.target, q), fs)
                if p < q:
                    u = horizontal_codeg(tree, q - 1)
                    yield Relation("hcodeg_shuffle", tree, lhs, _chain(shuffle_coface(u.target, p, s), u))
                elif p > q + 1:
                    u = horizontal_codeg(tree, q)
                    yield Relation("hcodeg_shuffle", tree, lhs, _chain(shuffle_coface(u.target, p - 1, s), u))
                elif p == q and s.b == 0:
                    yield Relation("hcodeg_shuffle", tree, lhs, ())
                elif p == q + 1 and s.a == 0:
                    yield Relation("hcodeg_shuffle", tree, lhs, ())


def relation_instances(max_cols: int, max_height: int) -> list[Relation]:
    """Every generator relation whose trees all have at most ``max_cols`` columns
    and column heights at most ``max_height``."""
    out = []
    for k in range(max_cols + 1):
        for hs in itertools.product(range(max_height + 1), repeat=k):
            for rel in _relation_instances(TwoTree(hs)):
                if all(t.k <= max_cols and all(h <= max_height for h in t.heights) for t in rel.trees()):
                    out.append(rel)
    return out
