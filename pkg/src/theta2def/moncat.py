"""Finite skeletal k-linear monoidal categories given by structure constants.

Conventions:

* ``alpha[x,y,z]`` lies in ``C(x (y z), (x y) z)``.
* ``whisker_left`` realizes ``m_{X,g}`` (``g`` on the right factor),
  ``whisker_right`` realizes ``m_{f,Y}``; ``f (x) g = m_{f,Y'} o m_{X,g}``.
* Functor constraints point ``F(X Y) -> FX FY``.
* Transformation components lie in ``D(G(X) E, E F(X))``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from typing import Any, Callable, Iterator, Sequence, Union

from .exactfield import QQ, ExactMatrix, Field, solve

Vector = tuple


class CategoryError(ValueError):
    """Malformed category, functor or transformation data."""


@dataclass(frozen=True)
class Morphism:
    """A morphism ``src -> tgt`` as a coordinate vector in the chosen hom basis."""

    src: int
    tgt: int
    vec: Vector

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.src, self.tgt, self.vec))
            object.__setattr__(self, "_hash", h)
        return h


# ---------------------------------------------------------------------------
# Tensor words


TensorWord = Union[None, int, tuple]  # None is the formal unit marker


def word_leaves(w: TensorWord) -> tuple[int, ...]:
    """Non-unit leaves, left to right."""
    if w is None:
        return ()
    if isinstance(w, int):
        return (w,)
    return word_leaves(w[0]) + word_leaves(w[1])


def right_nested(items: Sequence[TensorWord]) -> TensorWord:
    """``a (b (c ...))``; the empty sequence gives the unit marker."""
    if not items:
        return None
    out = items[-1]
    for it in reversed(items[:-1]):
        out = (it, out)
    return out


# ---------------------------------------------------------------------------
# Categories


@dataclass(eq=False)
class FinMonCat:
    field: Field
    objects: tuple[str, ...]
    unit: int
    tensor_obj: tuple[tuple[int, ...], ...]
    hom_dim: tuple[tuple[int, ...], ...]
    compose_table: dict[tuple[int, int, int], tuple[tuple[Vector, ...], ...]]
    whisker_left_table: dict[tuple[int, int, int], tuple[Vector, ...]]
    whisker_right_table: dict[tuple[int, int, int], tuple[Vector, ...]]
    associator: dict[tuple[int, int, int], Vector]
    lambda_: tuple[Vector, ...]
    rho: tuple[Vector, ...]
    identities: tuple[Vector, ...]
    _cache: dict = dc_field(default_factory=dict, repr=False)
    _memo: dict = dc_field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        n = len(self.objects)
        if not 0 <= self.unit < n:
            raise CategoryError("unit object out of range")
        T = self.tensor_obj
        for x in range(n):
            if T[self.unit][x] != x or T[x][self.unit] != x:
                raise CategoryError("unit object must be strict on objects (skeletal data)")
            for y in range(n):
                for z in range(n):
                    if T[x][T[y][z]] != T[T[x][y]][z]:
                        raise CategoryError("tensor product of objects must be associative")

    # -- basic accessors

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    def t(self, x: int, y: int) -> int:
        return self.tensor_obj[x][y]

    def hom(self, x: int, y: int) -> int:
        return self.hom_dim[x][y]

    def zero(self, x: int, y: int) -> Morphism:
        return Morphism(x, y, (self.field.zero,) * self.hom(x, y))

    def basis(self, x: int, y: int, i: int) -> Morphism:
        key = ("b", x, y, i)
        hit = self._cache.get(key)
        if hit is None:
            K = self.field
            hit = Morphism(x, y, tuple(K.one if j == i else K.zero for j in range(self.hom(x, y))))
            self._cache[key] = hit
        return hit

    def basis_all(self, x: int, y: int) -> list[Morphism]:
        return [self.basis(x, y, i) for i in range(self.hom(x, y))]

    def id(self, x: int) -> Morphism:
        key = ("i", x)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = Morphism(x, x, self.identities[x])
        return hit

    def add(self, f: Morphism, g: Morphism) -> Morphism:
        self._same(f, g)
        K = self.field
        return Morphism(f.src, f.tgt, tuple(K.add(a, b) for a, b in zip(f.vec, g.vec)))

    def sub(self, f: Morphism, g: Morphism) -> Morphism:
        self._same(f, g)
        K = self.field
        return Morphism(f.src, f.tgt, tuple(K.sub(a, b) for a, b in zip(f.vec, g.vec)))

    def scale(self, c: Any, f: Morphism) -> Morphism:
        K = self.field
        return Morphism(f.src, f.tgt, tuple(K.mul(c, a) for a in f.vec))

    def is_zero(self, f: Morphism) -> bool:
        return all(self.field.is_zero(a) for a in f.vec)

    def equal(self, f: Morphism, g: Morphism) -> bool:
        return f.src == g.src and f.tgt == g.tgt and self.is_zero(self.sub(f, g))

    @staticmethod
    def _same(f: Morphism, g: Morphism) -> None:
        if f.src != g.src or f.tgt != g.tgt:
            raise CategoryError(f"morphisms live in different hom spaces: {f.src}->{f.tgt} vs {g.src}->{g.tgt}")

    # -- structure maps

    def comp(self, g: Morphism, f: Morphism) -> Morphism:
        """``g o f``."""
        key = ("c", g, f)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._comp(g, f)
            self._remember(key, hit)
        return hit

    def _remember(self, key: tuple, value: Morphism) -> None:
        if len(self._memo) > 500_000:
            self._memo.clear()
        self._memo[key] = value

    def _comp(self, g: Morphism, f: Morphism) -> Morphism:
        if f.tgt != g.src:
            raise CategoryError(f"cannot compose {g.src}->{g.tgt} after {f.src}->{f.tgt}")
        x, y, z = f.src, f.tgt, g.tgt
        K = self.field
        out = [K.zero] * self.hom(x, z)
        if not out:
            return Morphism(x, z, ())
        table = self.compose_table.get((x, y, z))
        if table is None:
            return Morphism(x, z, tuple(out))
        for b, gb in enumerate(g.vec):
            if K.is_zero(gb):
                continue
            row = table[b]
            for a, fa in enumerate(f.vec):
                if K.is_zero(fa):
                    continue
                c = K.mul(gb, fa)
                for i, v in enumerate(row[a]):
                    if not K.is_zero(v):
                        out[i] = K.add(out[i], K.mul(c, v))
        return Morphism(x, z, tuple(out))

    def comp_all(self, *ms: Morphism) -> Morphism:
        """``ms[0] o ms[1] o ... o ms[-1]``."""
        out = ms[-1]
        for g in reversed(ms[:-1]):
            out = self.comp(g, out)
        return out

    def _whisker(self, table: dict, key: tuple, src: int, tgt: int, coeffs: Vector) -> Morphism:
        K = self.field
        out = [K.zero] * self.hom(src, tgt)
        if out:
            images = table.get(key)
            if images is not None:
                for b, c in enumerate(coeffs):
                    if K.is_zero(c):
                        continue
                    for i, v in enumerate(images[b]):
                        if not K.is_zero(v):
                            out[i] = K.add(out[i], K.mul(c, v))
        return Morphism(src, tgt, tuple(out))

    def wl(self, x: int, g: Morphism) -> Morphism:
        """``m_{x,g}: x g.src -> x g.tgt``."""
        return self._whisker(self.whisker_left_table, (x, g.src, g.tgt), self.t(x, g.src), self.t(x, g.tgt), g.vec)

    def wr(self, f: Morphism, y: int) -> Morphism:
        """``m_{f,y}: f.src y -> f.tgt y``."""
        return self._whisker(self.whisker_right_table, (f.src, f.tgt, y), self.t(f.src, y), self.t(f.tgt, y), f.vec)

    def tensor(self, f: Morphism, g: Morphism) -> Morphism:
        """``f (x) g = m_{f,g.tgt} o m_{f.src,g}``."""
        key = ("t", f, g)
        hit = self._memo.get(key)
        if hit is None:
            hit = self.comp(self.wr(f, g.tgt), self.wl(f.src, g))
            self._remember(key, hit)
        return hit

    def alpha(self, x: int, y: int, z: int) -> Morphism:
        o = self.t(x, self.t(y, z))
        return Morphism(o, o, self.associator[(x, y, z)])

    def lam(self, x: int) -> Morphism:
        return Morphism(x, x, self.lambda_[x])

    def rho_(self, x: int) -> Morphism:
        return Morphism(x, x, self.rho[x])

    def alpha_inv(self, x: int, y: int, z: int) -> Morphism:
        return self._cached_inverse(("a", x, y, z), lambda: self.alpha(x, y, z))

    def lam_inv(self, x: int) -> Morphism:
        return self._cached_inverse(("l", x), lambda: self.lam(x))

    def rho_inv(self, x: int) -> Morphism:
        return self._cached_inverse(("r", x), lambda: self.rho_(x))

    def _cached_inverse(self, key: tuple, get: Callable[[], Morphism]) -> Morphism:
        if key not in self._cache:
            inv = self.inverse(get())
            if inv is None:
                raise CategoryError(f"structure morphism {key} is not invertible")
            self._cache[key] = inv
        return self._cache[key]

    def left_mult_matrix(self, f: Morphism, z: int) -> ExactMatrix:
        """Matrix of ``g |-> g o f`` from ``C(f.tgt, z)`` to ``C(f.src, z)``."""
        cols = [self.comp(g, f).vec for g in self.basis_all(f.tgt, z)]
        return ExactMatrix.from_columns(self.field, self.hom(f.src, z), cols)

    def inverse(self, f: Morphism) -> Morphism | None:
        """Two-sided inverse of ``f`` or None."""
        M = self.left_mult_matrix(f, f.src)
        x = solve(M, list(self.id(f.src).vec))
        if x is None:
            return None
        g = Morphism(f.tgt, f.src, tuple(x))
        if not self.equal(self.comp(f, g), self.id(f.tgt)):
            return None
        return g

    # -- base change

    def base_change(self, K2: Field, embed: Callable[[Any], Any]) -> FinMonCat:
        def mv(v: Vector) -> Vector:
            return tuple(embed(a) for a in v)

        return FinMonCat(
            field=K2,
            objects=self.objects,
            unit=self.unit,
            tensor_obj=self.tensor_obj,
            hom_dim=self.hom_dim,
            compose_table={k: tuple(tuple(mv(v) for v in row) for row in t) for k, t in self.compose_table.items()},
            whisker_left_table={k: tuple(mv(v) for v in t) for k, t in self.whisker_left_table.items()},
            whisker_right_table={k: tuple(mv(v) for v in t) for k, t in self.whisker_right_table.items()},
            associator={k: mv(v) for k, v in self.associator.items()},
            lambda_=tuple(mv(v) for v in self.lambda_),
            rho=tuple(mv(v) for v in self.rho),
            identities=tuple(mv(v) for v in self.identities),
        )

    def __repr__(self) -> str:
        return f"FinMonCat(objects={list(self.objects)}, field={self.field})"


# ---------------------------------------------------------------------------
# Built-in generators


def cyclic_group_table(n: int) -> list[list[int]]:
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def _check_group(table: Sequence[Sequence[int]]) -> int:
    n = len(table)
    if any(len(r) != n for r in table) or any(v not in range(n) for r in table for v in r):
        raise CategoryError("group table must be square with entries in range")
    ids = [e for e in range(n) if all(table[e][x] == x and table[x][e] == x for x in range(n))]
    if not ids:
        raise CategoryError("group table has no identity")
    e = ids[0]
    for a, b, c in itertools.product(range(n), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise CategoryError("group table is not associative")
    for a in range(n):
        if sorted(table[a]) != list(range(n)) or sorted(r[a] for r in table) != list(range(n)):
            raise CategoryError("group table is not a Latin square")
    return e


def vec_g_omega(
    table: Sequence[Sequence[int]],
    omega: Callable[[int, int, int], Any] | None = None,
    field: Field = QQ,
    names: Sequence[str] | None = None,
    check_normalized: bool = True,
) -> FinMonCat:
    """Skeletal ``Vec_G`` with associator ``omega(g,h,k) id`` and trivial unitors."""
    e = _check_group(table)
    n = len(table)
    K = field
    om = (lambda a, b, c: 1) if omega is None else omega
    if check_normalized:
        for a, b in itertools.product(range(n), repeat=2):
            for args in ((e, a, b), (a, e, b), (a, b, e)):
                if K.coerce(om(*args)) != K.one:
                    raise CategoryError(f"omega is not normalized at {args}")
    one = (K.one,)
    hom = tuple(tuple(1 if x == y else 0 for y in range(n)) for x in range(n))
    compose_table = {(x, x, x): ((one,),) for x in range(n)}
    wl = {(x, y, y): (one,) for x in range(n) for y in range(n)}
    wr = {(x, x, y): (one,) for x in range(n) for y in range(n)}
    assoc = {}
    for a, b, c in itertools.product(range(n), repeat=3):
        v = K.coerce(om(a, b, c))
        if K.is_zero(v):
            raise CategoryError(f"omega{(a, b, c)} is zero")
        assoc[(a, b, c)] = (v,)
    return FinMonCat(
        field=K,
        objects=tuple(names) if names else tuple(f"g{i}" for i in range(n)),
        unit=e,
        tensor_obj=tuple(tuple(r) for r in table),
        hom_dim=hom,
        compose_table=compose_table,
        whisker_left_table=wl,
        whisker_right_table=wr,
        associator=assoc,
        lambda_=tuple(one for _ in range(n)),
        rho=tuple(one for _ in range(n)),
        identities=tuple(one for _ in range(n)),
    )


def z2_sign_cocycle(a: int, b: int, c: int) -> int:
    """The normalized 3-cocycle ``(-1)^(abc)`` on ``Z/2``."""
    return -1 if a * b * c % 2 else 1


def deloop_algebra(
    mult: Sequence[Sequence[Sequence[Any]]],
    unit: Sequence[Any],
    field: Field = QQ,
) -> FinMonCat:
    """One object with endomorphism algebra ``A``; ``mult[i][j]`` is ``e_i e_j``.

    Composition and both whiskerings are multiplication; ``alpha = lambda = rho = 1``.
    """
    K = field
    d = len(unit)
    M = [[tuple(K.coerce(v) for v in mult[i][j]) for j in range(d)] for i in range(d)]
    u = tuple(K.coerce(v) for v in unit)
    if any(len(M[i]) != d or len(M[i][j]) != d for i in range(d) for j in range(d)):
        raise CategoryError("structure constants must be d x d x d")

    def mul(x: Vector, y: Vector) -> Vector:
        out = [K.zero] * d
        for i, a in enumerate(x):
            for j, b in enumerate(y):
                if K.is_zero(a) or K.is_zero(b):
                    continue
                c = K.mul(a, b)
                for k, v in enumerate(M[i][j]):
                    out[k] = K.add(out[k], K.mul(c, v))
        return tuple(out)

    basis = [tuple(K.one if k == i else K.zero for k in range(d)) for i in range(d)]
    for i, j in itertools.product(range(d), repeat=2):
        if mul(basis[i], basis[j]) != mul(basis[j], basis[i]):
            raise CategoryError("algebra is not commutative")
        if mul(u, basis[i]) != basis[i] or mul(basis[i], u) != basis[i]:
            raise CategoryError("unit vector is not a two-sided unit")
    for i, j, k in itertools.product(range(d), repeat=3):
        if mul(mul(basis[i], basis[j]), basis[k]) != mul(basis[i], mul(basis[j], basis[k])):
            raise CategoryError("algebra is not associative")
    table = tuple(tuple(M[b][a] for a in range(d)) for b in range(d))
    whisk = tuple(basis)
    return FinMonCat(
        field=K,
        objects=("*",),
        unit=0,
        tensor_obj=((0,),),
        hom_dim=((d,),),
        compose_table={(0, 0, 0): table},
        whisker_left_table={(0, 0, 0): whisk},
        whisker_right_table={(0, 0, 0): whisk},
        associator={(0, 0, 0): u},
        lambda_=(u,),
        rho=(u,),
        identities=(u,),
    )


def graded_algebra_category(
    table: Sequence[Sequence[int]],
    mult: Sequence[Sequence[Sequence[Any]]],
    unit: Sequence[Any],
    omega: Callable[[int, int, int], Any] | None = None,
    field: Field = QQ,
) -> FinMonCat:
    """Objects a group ``G``, ``End(g) = A`` commutative, whiskering by coefficients, ``alpha = omega 1``.

    With ``A = k`` this is ``Vec_G^omega``; with ``G`` trivial it is the delooping of ``A``.
    """
    A = deloop_algebra(mult, unit, field)
    G = vec_g_omega(table, omega, field)
    K = field
    d = A.hom(0, 0)
    n = G.n_objects
    prod = A.compose_table[(0, 0, 0)]
    basis = A.whisker_left_table[(0, 0, 0)]
    u = A.identities[0]
    hom = tuple(tuple(d if x == y else 0 for y in range(n)) for x in range(n))
    assoc = {k: tuple(K.mul(v[0], c) for c in u) for k, v in G.associator.items()}
    return FinMonCat(
        field=K,
        objects=G.objects,
        unit=G.unit,
        tensor_obj=G.tensor_obj,
        hom_dim=hom,
        compose_table={(x, x, x): prod for x in range(n)},
        whisker_left_table={(x, y, y): basis for x in range(n) for y in range(n)},
        whisker_right_table={(x, x, y): basis for x in range(n) for y in range(n)},
        associator=assoc,
        lambda_=(u,) * n,
        rho=(u,) * n,
        identities=(u,) * n,
    )


def ground_field_algebra() -> tuple[list, list]:
    return [[[1]]], [1]


def truncated_polynomial_algebra(n: int) -> tuple[list, list]:
    """Structure constants of ``k[x]/(x^n)`` in the basis ``(1, x, ..., x^(n-1))``."""
    if n < 1:
        raise ValueError("need n >= 1")
    mult = [[[1 if k == i + j else 0 for k in range(n)] for j in range(n)] for i in range(n)]
    return mult, [1] + [0] * (n - 1)


def dual_number_algebra() -> tuple[list, list]:
    """Structure constants of ``k[x]/(x^2)`` in the basis ``(1, x)``."""
    return [[[1, 0], [0, 1]], [[0, 1], [0, 0]]], [1, 0]


# ---------------------------------------------------------------------------
# Validation


@dataclass
class AxiomResult:
    name: str
    instances: int = 0
    failures: int = 0
    first_failure: tuple | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def as_dict(self) -> dict:
        return {
            "instances": self.instances,
            "failures": self.failures,
            "pass": self.passed,
            "first_failure": list(self.first_failure) if self.first_failure is not None else None,
        }


@dataclass
class Report:
    axioms: dict[str, AxiomResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.axioms.values())

    def failed(self) -> list[str]:
        return [k for k, r in self.axioms.items() if not r.passed]

    def as_dict(self) -> dict:
        return {"pass": self.passed, "axioms": {k: r.as_dict() for k, r in self.axioms.items()}}


Residual = tuple[str, tuple, Morphism, Morphism]

CATEGORY_AXIOMS = (
    "associativity",
    "units",
    "interchange",
    "whisker_functoriality",
    "whisker_identity",
    "assoc_nat_left",
    "assoc_nat_middle",
    "assoc_nat_right",
    "pentagon",
    "left_unit_nat",
    "right_unit_nat",
    "unit_coincidence",
    "triangle",
)


def axiom_instances(C: FinMonCat) -> Iterator[Residual]:
    """Every axiom instance as ``(axiom, indices, lhs, rhs)`` on basis morphisms."""
    objs = range(C.n_objects)
    e = C.unit
    t = C.t
    pairs = [(x, y) for x in objs for y in objs if C.hom(x, y)]

    for (x, y), (y2, z), (z2, w) in itertools.product(pairs, repeat=3):
        if y2 != y or z2 != z:
            continue
        for a, b, c in itertools.product(range(C.hom(x, y)), range(C.hom(y, z)), range(C.hom(z, w))):
            f, g, h = C.basis(x, y, a), C.basis(y, z, b), C.basis(z, w, c)
            yield ("associativity", (x, y, z, w, a, b, c), C.comp(C.comp(h, g), f), C.comp(h, C.comp(g, f)))
    for x, y in pairs:
        for a in range(C.hom(x, y)):
            f = C.basis(x, y, a)
            yield ("units", (x, y, a, "left"), C.comp(C.id(y), f), f)
            yield ("units", (x, y, a, "right"), C.comp(f, C.id(x)), f)
    for (x, x2), (y, y2) in itertools.product(pairs, repeat=2):
        for a, b in itertools.product(range(C.hom(x, x2)), range(C.hom(y, y2))):
            f, g = C.basis(x, x2, a), C.basis(y, y2, b)
            yield (
                "interchange",
                (x, x2, y, y2, a, b),
                C.comp(C.wr(f, y2), C.wl(x, g)),
                C.comp(C.wl(x2, g), C.wr(f, y)),
            )
    for (x, x2), (x3, x4) in itertools.product(pairs, repeat=2):
        if x3 != x2:
            continue
        for a, b in itertools.product(range(C.hom(x, x2)), range(C.hom(x2, x4))):
            f, f2 = C.basis(x, x2, a), C.basis(x2, x4, b)
            for y in objs:
                yield ("whisker_functoriality", (x, x2, x4, a, b, y, "right"), C.comp(C.wr(f2, y), C.wr(f, y)), C.wr(C.comp(f2, f), y))
                yield ("whisker_functoriality", (y, x, x2, x4, a, b, "left"), C.comp(C.wl(y, f2), C.wl(y, f)), C.wl(y, C.comp(f2, f)))
    for x, y in itertools.product(objs, repeat=2):
        yield ("whisker_identity", (x, y, "left"), C.wl(x, C.id(y)), C.id(t(x, y)))
        yield ("whisker_identity", (x, y, "right"), C.wr(C.id(x), y), C.id(t(x, y)))
    for x, x2 in pairs:
        for a in range(C.hom(x, x2)):
            f = C.basis(x, x2, a)
            for y, z in itertools.product(objs, repeat=2):
                yield (
                    "assoc_nat_left",
                    (x, x2, a, y, z),
                    C.comp(C.wr(C.wr(f, y), z), C.alpha(x, y, z)),
                    C.comp(C.alpha(x2, y, z), C.wr(f, t(y, z))),
                )
                yield (
                    "assoc_nat_middle",
                    (y, x, x2, a, z),
                    C.comp(C.wr(C.wl(y, f), z), C.alpha(y, x, z)),
                    C.comp(C.alpha(y, x2, z), C.wl(y, C.wr(f, z))),
                )
                yield (
                    "assoc_nat_right",
                    (y, z, x, x2, a),
                    C.comp(C.wl(t(y, z), f), C.alpha(y, z, x)),
                    C.comp(C.alpha(y, z, x2), C.wl(y, C.wl(z, f))),
                )
            yield ("left_unit_nat", (x, x2, a), C.comp(f, C.lam(x)), C.comp(C.lam(x2), C.wl(e, f)))
            yield ("right_unit_nat", (x, x2, a), C.comp(f, C.rho_(x)), C.comp(C.rho_(x2), C.wr(f, e)))
    for x, y, z, w in itertools.product(objs, repeat=4):
        yield (
            "pentagon",
            (x, y, z, w),
            C.comp(C.alpha(t(x, y), z, w), C.alpha(x, y, t(z, w))),
            C.comp_all(C.wr(C.alpha(x, y, z), w), C.alpha(x, t(y, z), w), C.wl(x, C.alpha(y, z, w))),
        )
    yield ("unit_coincidence", (e,), C.lam(e), C.rho_(e))
    for x, y in itertools.product(objs, repeat=2):
        yield ("triangle", (x, y), C.comp(C.wr(C.rho_(x), y), C.alpha(x, e, y)), C.wl(x, C.lam(y)))


def validate(C: FinMonCat) -> Report:
    """Per-axiom pass/fail with the first failing instance."""
    results = {name: AxiomResult(name) for name in CATEGORY_AXIOMS}
    results["invertibility"] = AxiomResult("invertibility")
    for name, idx, lhs, rhs in axiom_instances(C):
        r = results[name]
        r.instances += 1
        if not C.equal(lhs, rhs):
            r.failures += 1
            if r.first_failure is None:
                r.first_failure = idx
    inv = results["invertibility"]
    objs = range(C.n_objects)
    structural = [("alpha", x, y, z) for x, y, z in itertools.product(objs, repeat=3)]
    structural += [("lambda", x) for x in objs] + [("rho", x) for x in objs]
    for key in structural:
        inv.instances += 1
        m = C.alpha(*key[1:]) if key[0] == "alpha" else C.lam(key[1]) if key[0] == "lambda" else C.rho_(key[1])
        if C.inverse(m) is None:
            inv.failures += 1
            inv.first_failure = inv.first_failure or key
    return Report(results)


# ---------------------------------------------------------------------------
# Coherence


def word_object(C: FinMonCat, w: TensorWord) -> int:
    if w is None:
        return C.unit
    if isinstance(w, int):
        return w
    return C.t(word_object(C, w[0]), word_object(C, w[1]))


def _redexes(w: TensorWord, path: tuple = ()) -> Iterator[tuple[tuple, str]]:
    if not isinstance(w, tuple):
        return
    left, right = w
    if isinstance(left, tuple):
        yield path, "assoc"
    if left is None:
        yield path, "lambda"
    if right is None:
        yield path, "rho"
    yield from _redexes(left, path + (0,))
    yield from _redexes(right, path + (1,))


def _subword(w: TensorWord, path: tuple) -> TensorWord:
    for step in path:
        w = w[step]  # type: ignore[index]
    return w


def _replace(w: TensorWord, path: tuple, new: TensorWord) -> TensorWord:
    if not path:
        return new
    left, right = w  # type: ignore[misc]
    if path[0] == 0:
        return (_replace(left, path[1:], new), right)
    return (left, _replace(right, path[1:], new))


def _whisker_into(C: FinMonCat, w: TensorWord, path: tuple, m: Morphism) -> Morphism:
    """Extend a morphism acting on the subword at ``path`` to the whole word."""
    if not path:
        return m
    left, right = w  # type: ignore[misc]
    if path[0] == 0:
        return C.wr(_whisker_into(C, left, path[1:], m), word_object(C, right))
    return C.wl(word_object(C, left), _whisker_into(C, right, path[1:], m))


def normalize(C: FinMonCat, w: TensorWord, rng: random.Random | None = None) -> tuple[TensorWord, Morphism, Morphism]:
    """Rewrite ``w`` to its right-nested unit-free normal form.

    Returns ``(normal_form, forward, backward)`` with ``forward: eval(w) -> eval(nf)``.
    Redexes are taken leftmost-outermost, or uniformly at random when ``rng`` is given.
    """
    fwd = C.id(word_object(C, w))
    bwd = fwd
    while True:
        reds = list(_redexes(w))
        if not reds:
            return w, fwd, bwd
        path, kind = rng.choice(reds) if rng is not None else reds[0]
        sub = _subword(w, path)
        left, right = sub  # type: ignore[misc]
        if kind == "assoc":
            u, v = left
            x, y, z = word_object(C, u), word_object(C, v), word_object(C, right)
            step, back, new = C.alpha_inv(x, y, z), C.alpha(x, y, z), (u, (v, right))
        elif kind == "lambda":
            x = word_object(C, right)
            step, back, new = C.lam(x), C.lam_inv(x), right
        else:
            x = word_object(C, left)
            step, back, new = C.rho_(x), C.rho_inv(x), left
        fwd = C.comp(_whisker_into(C, w, path, step), fwd)
        bwd = C.comp(bwd, _whisker_into(C, w, path, back))
        w = _replace(w, path, new)


def coherence_iso(C: FinMonCat, w1: TensorWord, w2: TensorWord, rng: random.Random | None = None) -> Morphism:
    """The canonical structural isomorphism ``eval(w1) -> eval(w2)``."""
    if word_leaves(w1) != word_leaves(w2):
        raise CategoryError(f"words have different leaves: {word_leaves(w1)} vs {word_leaves(w2)}")
    if w1 == w2 and rng is None:
        return C.id(word_object(C, w1))
    key = (w1, w2)
    if rng is None and key in C._cache:
        return C._cache[key]
    _, f1, _ = normalize(C, w1, rng)
    _, _, b2 = normalize(C, w2, rng)
    out = C.comp(b2, f1)
    if rng is None:
        C._cache[key] = out
    return out


# ---------------------------------------------------------------------------
# Functors and transformations


@dataclass(eq=False)
class MonFunctor:
    source: FinMonCat
    target: FinMonCat
    obj_map: tuple[int, ...]
    hom_maps: dict[tuple[int, int], tuple[Vector, ...]]
    constraint: dict[tuple[int, int], Vector]
    unit_constraint: Vector
    is_identity: bool = False
    _cache: dict = dc_field(default_factory=dict, repr=False)

    def obj(self, x: int) -> int:
        return self.obj_map[x]

    def __call__(self, f: Morphism) -> Morphism:
        D = self.target
        K = D.field
        src, tgt = self.obj(f.src), self.obj(f.tgt)
        out = [K.zero] * D.hom(src, tgt)
        images = self.hom_maps.get((f.src, f.tgt), ())
        for c, img in zip(f.vec, images):
            if K.is_zero(c):
                continue
            for i, v in enumerate(img):
                out[i] = K.add(out[i], K.mul(c, v))
        return Morphism(src, tgt, tuple(out))

    def phi(self, x: int, y: int) -> Morphism:
        """``F(x y) -> Fx Fy``."""
        D = self.target
        return Morphism(self.obj(self.source.t(x, y)), D.t(self.obj(x), self.obj(y)), self.constraint[(x, y)])

    def phi_inv(self, x: int, y: int) -> Morphism:
        key = ("phi", x, y)
        if key not in self._cache:
            inv = self.target.inverse(self.phi(x, y))
            if inv is None:
                raise CategoryError(f"functor constraint at {(x, y)} is not invertible")
            self._cache[key] = inv
        return self._cache[key]

    def phi0(self) -> Morphism:
        return Morphism(self.obj(self.source.unit), self.target.unit, self.unit_constraint)


def identity_functor(C: FinMonCat) -> MonFunctor:
    objs = range(C.n_objects)
    return MonFunctor(
        source=C,
        target=C,
        obj_map=tuple(objs),
        hom_maps={(x, y): tuple(b.vec for b in C.basis_all(x, y)) for x in objs for y in objs if C.hom(x, y)},
        constraint={(x, y): C.id(C.t(x, y)).vec for x in objs for y in objs},
        unit_constraint=C.id(C.unit).vec,
        is_identity=True,
    )


def identity_on_objects_functor(C: FinMonCat, constraint: Callable[[int, int], Any]) -> MonFunctor:
    """Identity on objects and morphisms of a ``Vec_G``-type category, with scalar constraints."""
    F = identity_functor(C)
    K = C.field
    cons = {}
    for (x, y), v in F.constraint.items():
        cons[(x, y)] = tuple(K.mul(K.coerce(constraint(x, y)), a) for a in v)
    return MonFunctor(C, C, F.obj_map, F.hom_maps, cons, F.unit_constraint, is_identity=False)


FUNCTOR_AXIOMS = (
    "functor_composition",
    "functor_identity",
    "constraint_naturality",
    "hexagon",
    "left_unit_compat",
    "right_unit_compat",
    "invertibility",
)


def validate_functor(F: MonFunctor) -> Report:
    C, D = F.source, F.target
    results = {n: AxiomResult(n) for n in FUNCTOR_AXIOMS}
    objs = range(C.n_objects)

    def check(name: str, idx: tuple, lhs: Morphism, rhs: Morphism) -> None:
        r = results[name]
        r.instances += 1
        if not D.equal(lhs, rhs):
            r.failures += 1
            if r.first_failure is None:
                r.first_failure = idx

    for x, y, z in itertools.product(objs, repeat=3):
        for a, b in itertools.product(range(C.hom(x, y)), range(C.hom(y, z))):
            f, g = C.basis(x, y, a), C.basis(y, z, b)
            check("functor_composition", (x, y, z, a, b), F(C.comp(g, f)), D.comp(F(g), F(f)))
    for x in objs:
        check("functor_identity", (x,), F(C.id(x)), D.id(F.obj(x)))
    for x, x2, y in itertools.product(objs, repeat=3):
        for a in range(C.hom(x, x2)):
            f = C.basis(x, x2, a)
            check(
                "constraint_naturality",
                (x, x2, a, y, "right"),
                D.comp(F.phi(x2, y), F(C.wr(f, y))),
                D.comp(D.wr(F(f), F.obj(y)), F.phi(x, y)),
            )
            check(
                "constraint_naturality",
                (y, x, x2, a, "left"),
                D.comp(F.phi(y, x2), F(C.wl(y, f))),
                D.comp(D.wl(F.obj(y), F(f)), F.phi(y, x)),
            )
    for x, y, z in itertools.product(objs, repeat=3):
        Fx, Fy, Fz = F.obj(x), F.obj(y), F.obj(z)
        check(
            "hexagon",
            (x, y, z),
            D.comp_all(D.alpha(Fx, Fy, Fz), D.wl(Fx, F.phi(y, z)), F.phi(x, C.t(y, z))),
            D.comp_all(D.wr(F.phi(x, y), Fz), F.phi(C.t(x, y), z), F(C.alpha(x, y, z))),
        )
    for x in objs:
        Fx = F.obj(x)
        check(
            "left_unit_compat",
            (x,),
            D.comp_all(D.lam(Fx), D.wr(F.phi0(), Fx), F.phi(C.unit, x)),
            F(C.lam(x)),
        )
        check(
            "right_unit_compat",
            (x,),
            D.comp_all(D.rho_(Fx), D.wl(Fx, F.phi0()), F.phi(x, C.unit)),
            F(C.rho_(x)),
        )
    inv = results["invertibility"]
    for x, y in itertools.product(objs, repeat=2):
        inv.instances += 1
        if D.inverse(F.phi(x, y)) is None:
            inv.failures += 1
            inv.first_failure = inv.first_failure or (x, y)
    inv.instances += 1
    if D.inverse(F.phi0()) is None:
        inv.failures += 1
        inv.first_failure = inv.first_failure or ("unit",)
    return Report(results)


@dataclass(eq=False)
class MonTransform:
    source: MonFunctor
    target: MonFunctor
    carrier: int
    components: tuple[Vector, ...]
    is_identity: bool = False

    def component(self, x: int) -> Morphism:
        D = self.source.target
        E = self.carrier
        return Morphism(D.t(self.target.obj(x), E), D.t(E, self.source.obj(x)), self.components[x])


def identity_transform(F: MonFunctor) -> MonTransform:
    """Carrier ``e`` with components ``lambda^{-1} o rho: F(X) e -> e F(X)``."""
    D = F.target
    comps = tuple(D.comp(D.lam_inv(F.obj(x)), D.rho_(F.obj(x))).vec for x in range(F.source.n_objects))
    return MonTransform(F, F, D.unit, comps, is_identity=True)


TRANSFORM_AXIOMS = ("naturality", "tensor_compat", "unit_compat", "invertibility")


def validate_transform(eta: MonTransform) -> Report:
    F, G = eta.source, eta.target
    C, D = F.source, F.target
    E = eta.carrier
    results = {n: AxiomResult(n) for n in TRANSFORM_AXIOMS}
    objs = range(C.n_objects)

    def check(name: str, idx: tuple, lhs: Morphism, rhs: Morphism) -> None:
        r = results[name]
        r.instances += 1
        if not D.equal(lhs, rhs):
            r.failures += 1
            if r.first_failure is None:
                r.first_failure = idx

    for x, x2 in itertools.product(objs, repeat=2):
        for a in range(C.hom(x, x2)):
            f = C.basis(x, x2, a)
            check(
                "naturality",
                (x, x2, a),
                D.comp(eta.component(x2), D.wr(G(f), E)),
                D.comp(D.wl(E, F(f)), eta.component(x)),
            )
    for x, y in itertools.product(objs, repeat=2):
        Gx, Gy, Fx, Fy = G.obj(x), G.obj(y), F.obj(x), F.obj(y)
        lhs = D.comp(D.wl(E, F.phi(x, y)), eta.component(C.t(x, y)))
        rhs = D.comp_all(
            D.alpha_inv(E, Fx, Fy),
            D.wr(eta.component(x), Fy),
            D.alpha(Gx, E, Fy),
            D.wl(Gx, eta.component(y)),
            D.alpha_inv(Gx, Gy, E),
            D.wr(G.phi(x, y), E),
        )
        check("tensor_compat", (x, y), lhs, rhs)
    check(
        "unit_compat",
        (C.unit,),
        D.comp(D.lam(E), D.wr(G.phi0(), E)),
        D.comp_all(D.rho_(E), D.wl(E, F.phi0()), eta.component(C.unit)),
    )
    inv = results["invertibility"]
    for x in objs:
        inv.instances += 1
        if D.inverse(eta.component(x)) is None:
            inv.failures += 1
            inv.first_failure = inv.first_failure or (x,)
    return Report(results)
