"""Exact scalars (Q, F_p, dual numbers over either) and sparse linear algebra.

Matrices are stored row-major as ``{row: {col: value}}`` with no zero entries.
Elimination is deterministic: rows are processed in order and each new pivot is
the first nonzero column of the reduced row; pivot rows are kept fully reduced.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Any, Iterable, Sequence


class LinAlgError(ValueError):
    """Shape mismatch or violated precondition in a linear-algebra routine."""


# ---------------------------------------------------------------------------
# Fields


class Field:
    """Arithmetic on a concrete representation of a ring of scalars."""

    name: str = "field"
    characteristic: int = 0

    @property
    def zero(self) -> Any:
        z = self.__dict__.get("_zero")
        if z is None:
            z = self.__dict__["_zero"] = self.from_int(0)
        return z

    @property
    def one(self) -> Any:
        o = self.__dict__.get("_one")
        if o is None:
            o = self.__dict__["_one"] = self.from_int(1)
        return o

    def from_int(self, n: int) -> Any:
        raise NotImplementedError

    def add(self, a: Any, b: Any) -> Any:
        raise NotImplementedError

    def sub(self, a: Any, b: Any) -> Any:
        raise NotImplementedError

    def mul(self, a: Any, b: Any) -> Any:
        raise NotImplementedError

    def neg(self, a: Any) -> Any:
        raise NotImplementedError

    def inv(self, a: Any) -> Any:
        raise NotImplementedError

    def div(self, a: Any, b: Any) -> Any:
        return self.mul(a, self.inv(b))

    def is_zero(self, a: Any) -> bool:
        raise NotImplementedError

    def coerce(self, a: Any) -> Any:
        """Convert an int, Fraction or native element into this representation."""
        raise NotImplementedError

    def random(self, rng: Random, nonzero: bool = False) -> Any:
        raise NotImplementedError

    def to_json(self, a: Any) -> Any:
        raise NotImplementedError

    def __repr__(self) -> str:
        return self.name

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and self.name == other.name

    def __hash__(self) -> int:
        return hash(self.name)


class RationalField(Field):
    name = "Q"
    characteristic = 0

    def from_int(self, n: int) -> Fraction:
        return Fraction(n)

    def add(self, a: Fraction, b: Fraction) -> Fraction:
        return a + b

    def sub(self, a: Fraction, b: Fraction) -> Fraction:
        return a - b

    def mul(self, a: Fraction, b: Fraction) -> Fraction:
        return a * b

    def neg(self, a: Fraction) -> Fraction:
        return -a

    def inv(self, a: Fraction) -> Fraction:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in Q")
        return 1 / Fraction(a)

    def is_zero(self, a: Fraction) -> bool:
        return a == 0

    def coerce(self, a: Any) -> Fraction:
        if isinstance(a, str):
            return Fraction(a)
        return Fraction(a)

    def random(self, rng: Random, nonzero: bool = False) -> Fraction:
        while True:
            x = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
            if x or not nonzero:
                return x

    def to_json(self, a: Fraction) -> Any:
        a = Fraction(a)
        return a.numerator if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


class PrimeField(Field):
    def __init__(self, p: int) -> None:
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"F{p}"
        self.characteristic = p

    def from_int(self, n: int) -> int:
        return n % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError(f"inverse of 0 in {self.name}")
        return pow(a, -1, self.p)

    def is_zero(self, a: int) -> bool:
        return a % self.p == 0

    def coerce(self, a: Any) -> int:
        f = Fraction(a)
        return (f.numerator * pow(f.denominator, -1, self.p)) % self.p

    def random(self, rng: Random, nonzero: bool = False) -> int:
        return rng.randint(1 if nonzero else 0, self.p - 1)

    def to_json(self, a: int) -> int:
        return a % self.p


class DualNumbers(Field):
    """``base[t]/(t^2)``; elements are pairs ``(a, b)`` meaning ``a + b t``.

    Not a field: ``inv`` requires a unit (nonzero constant term).
    """

    def __init__(self, base: Field) -> None:
        self.base = base
        self.name = f"{base.name}[t]/t^2"
        self.characteristic = base.characteristic

    def from_int(self, n: int) -> tuple[Any, Any]:
        return (self.base.from_int(n), self.base.zero)

    def embed(self, a: Any) -> tuple[Any, Any]:
        return (a, self.base.zero)

    def t_times(self, b: Any) -> tuple[Any, Any]:
        return (self.base.zero, b)

    def add(self, x: tuple, y: tuple) -> tuple:
        B = self.base
        return (B.add(x[0], y[0]), B.add(x[1], y[1]))

    def sub(self, x: tuple, y: tuple) -> tuple:
        B = self.base
        return (B.sub(x[0], y[0]), B.sub(x[1], y[1]))

    def mul(self, x: tuple, y: tuple) -> tuple:
        B = self.base
        return (B.mul(x[0], y[0]), B.add(B.mul(x[0], y[1]), B.mul(x[1], y[0])))

    def neg(self, x: tuple) -> tuple:
        return (self.base.neg(x[0]), self.base.neg(x[1]))

    def inv(self, x: tuple) -> tuple:
        B = self.base
        a0 = B.inv(x[0])
        return (a0, B.neg(B.mul(x[1], B.mul(a0, a0))))

    def is_zero(self, x: tuple) -> bool:
        return self.base.is_zero(x[0]) and self.base.is_zero(x[1])

    def coerce(self, a: Any) -> tuple:
        if isinstance(a, tuple):
            return (self.base.coerce(a[0]), self.base.coerce(a[1]))
        return (self.base.coerce(a), self.base.zero)

    def random(self, rng: Random, nonzero: bool = False) -> tuple:
        return (self.base.random(rng, nonzero), self.base.random(rng))

    def to_json(self, x: tuple) -> Any:
        return [self.base.to_json(x[0]), self.base.to_json(x[1])]


QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_descriptor(desc: Any) -> Field:
    """``"Q"`` or ``{"Fp": p}``."""
    if desc == "Q" or desc is None:
        return QQ
    if isinstance(desc, dict) and "Fp" in desc:
        return PrimeField(int(desc["Fp"]))
    if isinstance(desc, str) and desc.startswith("F") and desc[1:].isdigit():
        return PrimeField(int(desc[1:]))
    raise ValueError(f"unknown field descriptor {desc!r}")


# ---------------------------------------------------------------------------
# Vectors (dense lists) helpers


def vec_add(K: Field, x: Sequence, y: Sequence) -> list:
    return [K.add(a, b) for a, b in zip(x, y)]


def vec_scale(K: Field, c: Any, x: Sequence) -> list:
    return [K.mul(c, a) for a in x]


def vec_is_zero(K: Field, x: Sequence) -> bool:
    return all(K.is_zero(a) for a in x)


# ---------------------------------------------------------------------------
# Matrices


class ExactMatrix:
    """Sparse matrix with entries in ``field``."""

    __slots__ = ("field", "nrows", "ncols", "data")

    def __init__(self, field: Field, nrows: int, ncols: int, data: dict[int, dict[int, Any]] | None = None) -> None:
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self.data: dict[int, dict[int, Any]] = {}
        if data:
            for r, row in data.items():
                clean = {c: v for c, v in row.items() if not field.is_zero(v)}
                if clean:
                    if not (0 <= r < nrows) or any(not 0 <= c < ncols for c in clean):
                        raise LinAlgError("entry index out of range")
                    self.data[r] = clean

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> ExactMatrix:
        return cls(field, nrows, ncols)

    @classmethod
    def identity(cls, field: Field, n: int) -> ExactMatrix:
        return cls(field, n, n, {i: {i: field.one} for i in range(n)})

    @classmethod
    def from_dense(cls, field: Field, rows: Sequence[Sequence[Any]], ncols: int | None = None) -> ExactMatrix:
        nr = len(rows)
        nc = len(rows[0]) if rows else (ncols or 0)
        return cls(field, nr, nc, {i: {j: field.coerce(v) for j, v in enumerate(r)} for i, r in enumerate(rows)})

    @classmethod
    def from_columns(cls, field: Field, nrows: int, columns: Sequence[Sequence[Any]]) -> ExactMatrix:
        data: dict[int, dict[int, Any]] = {}
        for j, col in enumerate(columns):
            for i, v in enumerate(col):
                if not field.is_zero(v):
                    data.setdefault(i, {})[j] = v
        return cls(field, nrows, len(columns), data)

    def get(self, i: int, j: int) -> Any:
        return self.data.get(i, {}).get(j, self.field.zero)

    def to_dense(self) -> list[list[Any]]:
        z = self.field.zero
        return [[self.data.get(i, {}).get(j, z) for j in range(self.ncols)] for i in range(self.nrows)]

    def column(self, j: int) -> list[Any]:
        z = self.field.zero
        return [self.data[i][j] if i in self.data and j in self.data[i] else z for i in range(self.nrows)]

    def columns(self) -> list[list[Any]]:
        cols = [[self.field.zero] * self.nrows for _ in range(self.ncols)]
        for i, row in self.data.items():
            for j, v in row.items():
                cols[j][i] = v
        return cols

    def nnz(self) -> int:
        return sum(len(r) for r in self.data.values())

    def is_zero(self) -> bool:
        return not self.data

    def first_nonzero(self) -> tuple[int, int, Any] | None:
        for i in sorted(self.data):
            j = min(self.data[i])
            return (i, j, self.data[i][j])
        return None

    def transpose(self) -> ExactMatrix:
        data: dict[int, dict[int, Any]] = {}
        for i, row in self.data.items():
            for j, v in row.items():
                data.setdefault(j, {})[i] = v
        out = ExactMatrix(self.field, self.ncols, self.nrows)
        out.data = data
        return out

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        if self.ncols != other.nrows:
            raise LinAlgError(f"shape mismatch {self.shape} @ {other.shape}")
        K = self.field
        add, mul, isz = K.add, K.mul, K.is_zero
        odata = other.data
        data: dict[int, dict[int, Any]] = {}
        for i, row in self.data.items():
            acc: dict[int, Any] = {}
            for k, a in row.items():
                orow = odata.get(k)
                if not orow:
                    continue
                for j, b in orow.items():
                    prod = mul(a, b)
                    acc[j] = add(acc[j], prod) if j in acc else prod
            acc = {j: v for j, v in acc.items() if not isz(v)}
            if acc:
                data[i] = acc
        out = ExactMatrix(K, self.nrows, other.ncols)
        out.data = data
        return out

    def _combine(self, other: ExactMatrix, sign: int) -> ExactMatrix:
        if self.shape != other.shape:
            raise LinAlgError(f"shape mismatch {self.shape} vs {other.shape}")
        K = self.field
        data = {i: dict(r) for i, r in self.data.items()}
        for i, row in other.data.items():
            tgt = data.setdefault(i, {})
            for j, v in row.items():
                v = v if sign > 0 else K.neg(v)
                tgt[j] = K.add(tgt[j], v) if j in tgt else v
        return ExactMatrix(K, self.nrows, self.ncols, data)

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        return self._combine(other, 1)

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        return self._combine(other, -1)

    def __neg__(self) -> ExactMatrix:
        return self.scale(self.field.from_int(-1))

    def scale(self, c: Any) -> ExactMatrix:
        K = self.field
        return ExactMatrix(K, self.nrows, self.ncols, {i: {j: K.mul(c, v) for j, v in r.items()} for i, r in self.data.items()})

    def apply(self, vec: Sequence[Any]) -> list[Any]:
        if len(vec) != self.ncols:
            raise LinAlgError(f"vector of length {len(vec)} for matrix with {self.ncols} columns")
        K = self.field
        out = [K.zero] * self.nrows
        for i, row in self.data.items():
            acc = K.zero
            for j, v in row.items():
                acc = K.add(acc, K.mul(v, vec[j]))
            out[i] = acc
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        # entries are canonical, so equal dicts settle it; stray explicit zeros need the slow path
        return self.data == other.data or (self - other).is_zero()

    def __hash__(self) -> None:  # type: ignore[override]
        raise TypeError("ExactMatrix is not hashable")

    def __repr__(self) -> str:
        return f"ExactMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()}, {self.field})"

    def add_block(self, r0: int, c0: int, block: ExactMatrix, sign: int = 1) -> None:
        """In-place ``self[r0:, c0:] += sign * block`` (used during assembly only)."""
        K = self.field
        for i, row in block.data.items():
            tgt = self.data.setdefault(r0 + i, {})
            for j, v in row.items():
                v = v if sign > 0 else K.neg(v)
                jj = c0 + j
                nv = K.add(tgt[jj], v) if jj in tgt else v
                if K.is_zero(nv):
                    tgt.pop(jj, None)
                else:
                    tgt[jj] = nv
            if not tgt:
                del self.data[r0 + i]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> ExactMatrix:
        cmap = {c: n for n, c in enumerate(cols)}
        data = {}
        for n, r in enumerate(rows):
            row = self.data.get(r)
            if row:
                sub = {cmap[c]: v for c, v in row.items() if c in cmap}
                if sub:
                    data[n] = sub
        out = ExactMatrix(self.field, len(rows), len(cols))
        out.data = data
        return out


def hstack(field: Field, nrows: int, blocks: Sequence[ExactMatrix]) -> ExactMatrix:
    out = ExactMatrix(field, nrows, sum(b.ncols for b in blocks))
    c0 = 0
    for b in blocks:
        out.add_block(0, c0, b)
        c0 += b.ncols
    return out


def vstack(field: Field, ncols: int, blocks: Sequence[ExactMatrix]) -> ExactMatrix:
    out = ExactMatrix(field, sum(b.nrows for b in blocks), ncols)
    r0 = 0
    for b in blocks:
        out.add_block(r0, 0, b)
        r0 += b.nrows
    return out


# ---------------------------------------------------------------------------
# Elimination


@dataclass
class Echelon:
    """Fully reduced row echelon data: ``pivots[col] = row`` with leading 1."""

    field: Field
    ncols: int
    pivots: dict[int, dict[int, Any]]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict[int, Any]) -> dict[int, Any]:
        K = self.field
        row = dict(row)
        for c in sorted(c for c in row if c in self.pivots):
            coef = row.get(c)
            if coef is None:
                continue
            for j, v in self.pivots[c].items():
                nv = K.sub(row[j], K.mul(coef, v)) if j in row else K.neg(K.mul(coef, v))
                if K.is_zero(nv):
                    row.pop(j, None)
                else:
                    row[j] = nv
        return row

    def insert(self, row: dict[int, Any]) -> int | None:
        """Reduce ``row`` and add it as a pivot row; returns the new pivot column or None."""
        K = self.field
        row = self.reduce(row)
        if not row:
            return None
        c = min(row)
        inv = K.inv(row[c])
        row = {j: K.mul(inv, v) for j, v in row.items()}
        for prow in self.pivots.values():
            coef = prow.get(c)
            if coef is None:
                continue
            for j, v in row.items():
                nv = K.sub(prow[j], K.mul(coef, v)) if j in prow else K.neg(K.mul(coef, v))
                if K.is_zero(nv):
                    prow.pop(j, None)
                else:
                    prow[j] = nv
        self.pivots[c] = row
        return c


def echelon(M: ExactMatrix) -> Echelon:
    E = Echelon(M.field, M.ncols, {})
    for i in sorted(M.data):
        E.insert(M.data[i])
    return E


def rank(M: ExactMatrix) -> int:
    return echelon(M).rank


@dataclass
class Subspace:
    """Span of the (independent) columns of ``basis`` inside ``field^ambient``."""

    ambient: int
    basis: ExactMatrix

    @property
    def field(self) -> Field:
        return self.basis.field

    @property
    def dim(self) -> int:
        return self.basis.ncols

    @classmethod
    def full(cls, field: Field, n: int) -> Subspace:
        return cls(n, ExactMatrix.identity(field, n))

    @classmethod
    def zero(cls, field: Field, n: int) -> Subspace:
        return cls(n, ExactMatrix(field, n, 0))

    @classmethod
    def span(cls, field: Field, n: int, vectors: Iterable[Sequence[Any]]) -> Subspace:
        """Independent subset (first occurrence wins) of ``vectors``."""
        E = Echelon(field, n, {})
        keep = []
        for v in vectors:
            row = {i: x for i, x in enumerate(v) if not field.is_zero(x)}
            if E.insert(row) is not None:
                keep.append(list(v))
        return cls(n, ExactMatrix.from_columns(field, n, keep))

    def vectors(self) -> list[list[Any]]:
        return self.basis.columns()

    def _row_echelon(self) -> Echelon:
        return echelon(self.basis.transpose())

    def contains(self, vec: Sequence[Any]) -> bool:
        K = self.field
        return not self._row_echelon().reduce({i: x for i, x in enumerate(vec) if not K.is_zero(x)})

    def contains_subspace(self, other: Subspace) -> bool:
        E = self._row_echelon()
        return all(not E.reduce(row) for row in other.basis.transpose().data.values())

    def equals(self, other: Subspace) -> bool:
        return self.ambient == other.ambient and self.dim == other.dim and self.contains_subspace(other)

    def coordinates(self, vec: Sequence[Any]) -> list[Any] | None:
        return solve(self.basis, vec)


def kernel_basis(M: ExactMatrix) -> Subspace:
    K = M.field
    E = echelon(M)
    free = [c for c in range(M.ncols) if c not in E.pivots]
    cols = []
    for f in free:
        v = [K.zero] * M.ncols
        v[f] = K.one
        for c, row in E.pivots.items():
            if f in row:
                v[c] = K.neg(row[f])
        cols.append(v)
    return Subspace(M.ncols, ExactMatrix.from_columns(K, M.ncols, cols))


def image_basis(M: ExactMatrix) -> Subspace:
    E = echelon(M)
    cols = M.columns()
    return Subspace(M.nrows, ExactMatrix.from_columns(M.field, M.nrows, [cols[c] for c in sorted(E.pivots)]))


def solve(M: ExactMatrix, b: Sequence[Any]) -> list[Any] | None:
    """Some ``x`` with ``M x = b`` (free variables set to 0), or None."""
    K = M.field
    if len(b) != M.nrows:
        raise LinAlgError(f"right-hand side of length {len(b)} for {M.nrows} rows")
    aug = M.ncols
    E = Echelon(K, M.ncols + 1, {})
    for i in range(M.nrows):
        row = dict(M.data.get(i, {}))
        if not K.is_zero(b[i]):
            row[aug] = b[i]
        if row:
            E.insert(row)
    if aug in E.pivots:
        return None
    x = [K.zero] * M.ncols
    for c, row in E.pivots.items():
        x[c] = row.get(aug, K.zero)
    return x


def restrict(M: ExactMatrix, V: Subspace, W: Subspace) -> ExactMatrix:
    """Matrix of ``M|_V : V -> W`` in the given bases; raises if ``M V`` is not inside ``W``."""
    if M.ncols != V.ambient or M.nrows != W.ambient:
        raise LinAlgError("restrict: shape mismatch")
    images = (M @ V.basis).columns()
    cols = []
    for n, w in enumerate(images):
        x = solve(W.basis, w)
        if x is None:
            raise LinAlgError(f"restrict: image of basis vector {n} leaves the target subspace")
        cols.append(x)
    return ExactMatrix.from_columns(M.field, W.dim, cols)


def check_composable_zero(d_in: ExactMatrix, d_out: ExactMatrix) -> None:
    if d_out.ncols != d_in.nrows:
        raise LinAlgError(f"complex shapes do not chain: {d_in.shape} then {d_out.shape}")
    first = (d_out @ d_in).first_nonzero()
    if first is not None:
        raise LinAlgError(f"d_out o d_in != 0, first nonzero entry at {first[:2]}: {first[2]}")


def cohomology_dim(d_in: ExactMatrix, d_out: ExactMatrix) -> int:
    check_composable_zero(d_in, d_out)
    return d_out.ncols - rank(d_out) - rank(d_in)


def cohomology_representatives(d_in: ExactMatrix, d_out: ExactMatrix) -> list[list[Any]]:
    """Cocycles whose classes form a basis of ``ker d_out / im d_in``."""
    check_composable_zero(d_in, d_out)
    K = d_in.field
    E = echelon(d_in.transpose())
    reps = []
    for v in kernel_basis(d_out).vectors():
        if E.insert({i: x for i, x in enumerate(v) if not K.is_zero(x)}) is not None:
            reps.append(v)
    return reps
