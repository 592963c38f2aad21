"""Exact field arithmetic and dense exact linear algebra.

Two ground fields are supported: the rationals (``Fraction`` entries) and
prime fields GF(p) (canonical ``int`` representatives in ``[0, p)``).
Matrices are immutable wrappers around numpy arrays; prime-field matrices
use ``int64`` storage, rational matrices use ``object`` arrays of Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

# Products of two residues must fit comfortably in int64.
_INT64_MODULUS_LIMIT = 1 << 30
# float64 represents integers exactly below 2**53.
_FLOAT_EXACT = float(1 << 53)


@lru_cache(maxsize=None)
def _is_prime(q: int) -> bool:
    from sympy import isprime

    return bool(isprime(q))


@dataclass(frozen=True)
class FieldSpec:
    """The ground field: ``kind`` is ``"rationals"`` or ``"prime_field"``."""

    kind: str
    modulus: int | None = None

    def __post_init__(self):
        if self.kind == "rationals":
            if self.modulus is not None:
                raise ValueError("rationals take no modulus")
        elif self.kind == "prime_field":
            if self.modulus is None or self.modulus < 2 or not _is_prime(self.modulus):
                raise ValueError(f"modulus {self.modulus!r} is not a prime")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rationals(cls) -> FieldSpec:
        return cls("rationals")

    @classmethod
    def prime(cls, p: int) -> FieldSpec:
        return cls("prime_field", int(p))

    @classmethod
    def parse(cls, text: str) -> FieldSpec:
        """Parse ``"q"`` or ``"p:MODULUS"``."""
        text = text.strip()
        if text.lower() in ("q", "qq", "rationals"):
            return cls.rationals()
        if text.lower().startswith("p:"):
            try:
                p = int(text[2:])
            except ValueError:
                raise ValueError(f"bad field modulus in {text!r}") from None
            return cls.prime(p)
        raise ValueError(f"cannot parse field {text!r} (expected 'q' or 'p:MODULUS')")

    def __str__(self) -> str:
        return "q" if self.kind == "rationals" else f"p:{self.modulus}"

    @property
    def is_prime_field(self) -> bool:
        return self.kind == "prime_field"

    @property
    def characteristic(self) -> int:
        return self.modulus if self.is_prime_field else 0

    # -- scalars ---------------------------------------------------------

    def __call__(self, x) -> int | Fraction:
        """Coerce ``x`` (int, Fraction or decimal string) into the field."""
        if isinstance(x, str):
            return self.from_str(x)
        if self.is_prime_field:
            p = self.modulus
            if isinstance(x, Fraction):
                if x.denominator % p == 0:
                    raise ZeroDivisionError(f"{x} has no image in GF({p})")
                return x.numerator * pow(x.denominator, -1, p) % p
            return int(x) % p
        return Fraction(x)

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.is_prime_field:
            return pow(int(x), -1, self.modulus)
        return 1 / Fraction(x)

    def from_str(self, s: str):
        return self(Fraction(s.strip()))

    def to_str(self, x) -> str:
        return str(self(x))

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def random_element(self, rng, bound: int = 9):
        """Uniform element of GF(p); small random rational over Q."""
        if self.is_prime_field:
            return rng.randrange(self.modulus)
        return Fraction(rng.randint(-bound, bound))

    # -- arrays ----------------------------------------------------------

    @property
    def dtype(self):
        if self.is_prime_field and self.modulus < _INT64_MODULUS_LIMIT:
            return np.int64
        return object

    def reduce_array(self, a: np.ndarray) -> np.ndarray:
        if self.is_prime_field:
            if a.dtype == object:
                out = np.empty(a.shape, dtype=self.dtype)
                out.flat[:] = [self(v) for v in a.flat]
                return out
            return np.mod(a, self.modulus).astype(self.dtype, copy=False)
        if a.dtype != object:
            out = np.empty(a.shape, dtype=object)
            out.flat[:] = [Fraction(int(v)) for v in a.flat]
            return out
        return a

    def zeros(self, shape) -> np.ndarray:
        if self.dtype == object:
            out = np.empty(shape, dtype=object)
            out.fill(self.zero)
            return out
        return np.zeros(shape, dtype=self.dtype)


QQ = FieldSpec.rationals()
DEFAULT_FIELD = FieldSpec.prime(32003)


class ExactMatrix:
    """Immutable exact matrix over a :class:`FieldSpec`.

    Zero-sized shapes are allowed everywhere; they are the maps into or out
    of zero-dimensional spaces.
    """

    __slots__ = ("field", "data")

    def __init__(self, field: FieldSpec, data):
        arr = np.array(data, dtype=object)
        if arr.ndim != 2:
            if arr.size:
                raise ValueError("ExactMatrix needs a 2-d array")
            arr = arr.reshape(0, 0)
        out = field.zeros(arr.shape)
        out.flat[:] = [field(v) for v in arr.flat]
        out.setflags(write=False)
        self.field = field
        self.data = out

    @classmethod
    def _wrap(cls, field: FieldSpec, arr: np.ndarray) -> ExactMatrix:
        # trusted constructor: ``arr`` already reduced with the right dtype
        m = cls.__new__(cls)
        arr.setflags(write=False)
        m.field = field
        m.data = arr
        return m

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> ExactMatrix:
        return cls._wrap(field, field.zeros((rows, cols)))

    @classmethod
    def identity(cls, field: FieldSpec, size: int) -> ExactMatrix:
        a = field.zeros((size, size))
        for i in range(size):
            a[i, i] = field.one
        return cls._wrap(field, a)

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence], cols: int | None = None) -> ExactMatrix:
        rows = list(rows)
        if not rows:
            return cls.zeros(field, 0, cols or 0)
        a = field.zeros((len(rows), len(rows[0])))
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                a[i, j] = field(v)
        return cls._wrap(field, a)

    @classmethod
    def from_columns(cls, field: FieldSpec, columns: Sequence[Sequence], rows: int) -> ExactMatrix:
        if not columns:
            return cls.zeros(field, rows, 0)
        return cls.from_rows(field, columns).T

    @classmethod
    def from_entries(cls, field: FieldSpec, rows: int, cols: int, entries: Iterable) -> ExactMatrix:
        a = field.zeros((rows, cols))
        for r, c, v in entries:
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside {rows}x{cols}")
            a[r, c] = field(v)
        return cls._wrap(field, a)

    @classmethod
    def block(cls, field: FieldSpec, blocks: Sequence[Sequence[ExactMatrix]]) -> ExactMatrix:
        """Assemble a block matrix; row/column sizes must be consistent."""
        row_h = [b[0].rows for b in blocks]
        col_w = [b.cols for b in blocks[0]]
        a = field.zeros((sum(row_h), sum(col_w)))
        r0 = 0
        for bi, brow in enumerate(blocks):
            c0 = 0
            for bj, blk in enumerate(brow):
                if blk.shape != (row_h[bi], col_w[bj]):
                    raise ValueError(f"block ({bi},{bj}) has shape {blk.shape}, "
                                     f"expected {(row_h[bi], col_w[bj])}")
                a[r0:r0 + blk.rows, c0:c0 + blk.cols] = blk.data
                c0 += col_w[bj]
            r0 += row_h[bi]
        return cls._wrap(field, a)

    # -- basic protocol --------------------------------------------------

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def __getitem__(self, idx):
        return self.data[idx]

    def entries(self):
        """Nonzero entries as ``(row, col, value)`` in row-major order."""
        for r, c in zip(*np.nonzero(self.data)):
            yield int(r), int(c), self.field(self.data[r, c])

    def is_zero(self) -> bool:
        return not np.any(self.data)

    def first_nonzero(self) -> tuple[int, int] | None:
        nz = np.argwhere(self.data)
        return None if len(nz) == 0 else (int(nz[0][0]), int(nz[0][1]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and bool(np.all(self.data == other.data)))

    def __hash__(self):
        return hash((self.field, self.shape, tuple(self.entries())))

    def __repr__(self) -> str:
        return f"ExactMatrix({self.field}, {self.rows}x{self.cols}, nnz={np.count_nonzero(self.data)})"

    def tolist(self) -> list[list]:
        return [[self.field(self.data[i, j]) for j in range(self.cols)] for i in range(self.rows)]

    @property
    def T(self) -> ExactMatrix:
        return ExactMatrix._wrap(self.field, self.data.T.copy())

    def _check(self, other: ExactMatrix):
        if self.field != other.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        self._check(other)
        return ExactMatrix._wrap(self.field, self.field.reduce_array(self.data + other.data))

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        self._check(other)
        return ExactMatrix._wrap(self.field, self.field.reduce_array(self.data - other.data))

    def __neg__(self) -> ExactMatrix:
        return ExactMatrix._wrap(self.field, self.field.reduce_array(-self.data))

    def scale(self, c) -> ExactMatrix:
        c = self.field(c)
        return ExactMatrix._wrap(self.field, self.field.reduce_array(self.data * c))

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        f = self.field
        if f.dtype == object:
            if self.rows == 0 or other.cols == 0 or self.cols == 0:
                return ExactMatrix.zeros(f, self.rows, other.cols)
            return ExactMatrix._wrap(f, f.reduce_array(self.data.dot(other.data)))
        p = f.modulus
        if (p - 1) ** 2 * max(self.cols, 1) < _FLOAT_EXACT:
            # exact through BLAS: every partial sum stays below 2**53
            prod = self.data.astype(np.float64) @ other.data.astype(np.float64)
            return ExactMatrix._wrap(f, np.mod(prod, p).astype(np.int64))
        return ExactMatrix._wrap(f, f.reduce_array(
            self.data.astype(object).dot(other.data.astype(object))))

    def apply(self, vector: Sequence) -> list:
        """Matrix times a column vector given as a sequence."""
        v = ExactMatrix.from_columns(self.field, [list(vector)], self.cols)
        return [self.field(x) for x in (self @ v).data[:, 0]]

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        f = self.field
        return {"rows": self.rows, "cols": self.cols,
                "entries": [[r, c, f.to_str(v)] for r, c, v in self.entries()]}

    @classmethod
    def from_json(cls, field: FieldSpec, obj: dict) -> ExactMatrix:
        return cls.from_entries(field, int(obj["rows"]), int(obj["cols"]),
                                ((int(r), int(c), field.from_str(str(v)))
                                 for r, c, v in obj["entries"]))


# ---------------------------------------------------------------------------
# elimination kernels


def _echelon_modp(a: np.ndarray, p: int, reduced: bool):
    """Row echelon form over GF(p); pivot rows are normalized to 1."""
    a = a.copy()
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r, c:] = a[r, c:] * inv % p
        below = r + 1 + np.flatnonzero(a[r + 1:, c])
        targets = np.concatenate([np.flatnonzero(a[:r, c]), below]) if reduced else below
        if targets.size:
            factors = a[targets, c][:, None]
            a[targets, c:] = (a[targets, c:] - factors * a[r, c:]) % p
        pivots.append(c)
        r += 1
    return a, pivots


def _echelon_bareiss(rows: list[list[int]], ncols: int):
    """Fraction-free forward elimination on integer rows (in place).

    Returns the pivot columns; rows ``0..rank-1`` hold the echelon form.
    """
    nrows = len(rows)
    prev = 1
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        pv = pr[c]
        for i in range(r + 1, nrows):
            ri = rows[i]
            f = ri[c]
            for k in range(c + 1, ncols):
                ri[k] = (pv * ri[k] - f * pr[k]) // prev
            ri[c] = 0
        prev = pv
        pivots.append(c)
        r += 1
    return pivots


def _integer_rows(a: np.ndarray) -> list[list[int]]:
    out = []
    for row in a:
        den = 1
        for v in row:
            den = den * v.denominator // _gcd(den, v.denominator)
        out.append([int(v * den) for v in row])
    return out


def _gcd(x: int, y: int) -> int:
    while y:
        x, y = y, x % y
    return abs(x)


def rref(M: ExactMatrix) -> tuple[ExactMatrix, list[int]]:
    """Reduced row echelon form and pivot columns.

    Zero rows are kept at the bottom so the shape is unchanged.
    """
    f = M.field
    if M.rows == 0 or M.cols == 0:
        return M, []
    if f.is_prime_field and f.dtype != object:
        a, piv = _echelon_modp(M.data, f.modulus, reduced=True)
        return ExactMatrix._wrap(f, a), piv
    if f.is_prime_field:
        # huge modulus: generic path on python ints
        a = M.data.copy()
        piv = _rref_generic(a, f)
        return ExactMatrix._wrap(f, a), piv
    ints = _integer_rows(M.data)
    piv = _echelon_bareiss(ints, M.cols)
    a = np.empty(M.shape, dtype=object)
    a.fill(Fraction(0))
    for i in range(len(piv)):
        a[i, :] = [Fraction(v) for v in ints[i]]
    # back substitution in Fractions
    for i in range(len(piv) - 1, -1, -1):
        c = piv[i]
        a[i, :] = a[i, :] / a[i, c]
        for k in range(i):
            if a[k, c]:
                a[k, :] = a[k, :] - a[k, c] * a[i, :]
    return ExactMatrix._wrap(f, a), piv


def _rref_generic(a: np.ndarray, f: FieldSpec) -> list[int]:
    nrows, ncols = a.shape
    r = 0
    piv = []
    for c in range(ncols):
        if r == nrows:
            break
        k = next((i for i in range(r, nrows) if a[i, c]), None)
        if k is None:
            continue
        a[[r, k]] = a[[k, r]]
        inv = f.inv(a[r, c])
        a[r, :] = [f(v * inv) for v in a[r, :]]
        for i in range(nrows):
            if i != r and a[i, c]:
                g = a[i, c]
                a[i, :] = [f(x - g * y) for x, y in zip(a[i, :], a[r, :])]
        piv.append(c)
        r += 1
    return piv


def rank(M: ExactMatrix) -> int:
    """Rank over the ambient field."""
    f = M.field
    if M.rows == 0 or M.cols == 0:
        return 0
    if f.is_prime_field and f.dtype != object:
        # the pivot loop runs over columns: eliminate along the shorter side
        a = M.data if M.cols <= M.rows else M.data.T
        _, piv = _echelon_modp(a, f.modulus, reduced=False)
        return len(piv)
    if f.is_prime_field:
        return len(rref(M)[1])
    ints = _integer_rows(M.data)
    return len(_echelon_bareiss(ints, M.cols))


def kernel_basis(M: ExactMatrix) -> list[tuple]:
    """Basis of the right kernel, as the rows of a reduced echelon matrix.

    Every returned vector has leading entry 1; the basis is canonical, so
    identical input gives identical output.
    """
    f = M.field
    n = M.cols
    if n == 0:
        return []
    R, piv = rref(M)
    pivset = set(piv)
    free = [c for c in range(n) if c not in pivset]
    if not free:
        return []
    vecs = []
    for fc in free:
        v = [f.zero] * n
        v[fc] = f.one
        for i, pc in enumerate(piv):
            if R.data[i, fc]:
                v[pc] = f(-R.data[i, fc])
        vecs.append(v)
    K, kpiv = rref(ExactMatrix.from_rows(f, vecs))
    return [tuple(f(K.data[i, j]) for j in range(n)) for i in range(len(kpiv))]


def image_basis(M: ExactMatrix) -> list[tuple]:
    """Reduced echelon basis of the column space."""
    if M.rows == 0 or M.cols == 0:
        return []
    R, piv = rref(M.T)
    return [tuple(M.field(R.data[i, j]) for j in range(M.rows)) for i in range(len(piv))]


def column_space_rank(*blocks: ExactMatrix) -> int:
    """Rank of the horizontal concatenation of matrices with equal row count."""
    blocks = [b for b in blocks if b.cols]
    if not blocks:
        return 0
    f = blocks[0].field
    return rank(ExactMatrix.block(f, [blocks]))


def is_nondegenerate_pairing(M: ExactMatrix) -> bool:
    return M.rows == M.cols and rank(M) == M.rows
