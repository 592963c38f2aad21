"""Graded polynomial rings over an exact field.

``Polynomial`` lives in k[x_0..x_n]; ``BiPolynomial`` lives in
k[x_0..x_n, y_0..y_n], stored as a polynomial in 2(n+1) variables whose
first n+1 slots are the x's.  Monomials are plain exponent tuples; graded
pieces are enumerated in graded-lex order with x_0 > x_1 > ... > x_n.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, Mapping

from .exact_linalg import ExactMatrix, FieldSpec

Monomial = tuple  # tuple[int, ...]


@lru_cache(maxsize=None)
def _monomials(nvars: int, m: int) -> tuple[Monomial, ...]:
    if m < 0:
        return ()
    out = []
    # combinations of variable indices, lexicographic, give x_0^m first
    for combo in combinations_with_replacement(range(nvars), m):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return tuple(out)


@dataclass(frozen=True)
class GradedBasis:
    """Ordered monomial basis of S_m (or its index-aligned dual basis)."""

    n: int
    degree: int
    monomials: tuple[Monomial, ...]
    dual: bool = False
    index: Mapping[Monomial, int] = dc_field(default=None, compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.monomials)

    def __iter__(self):
        return iter(self.monomials)

    def __getitem__(self, i):
        return self.monomials[i]

    def dual_basis(self) -> GradedBasis:
        return GradedBasis(self.n, self.degree, self.monomials, not self.dual, self.index)


@lru_cache(maxsize=None)
def monomial_basis(n: int, m: int) -> GradedBasis:
    """Graded-lex basis of the degree-m piece of k[x_0..x_n]; empty for m < 0."""
    mons = _monomials(n + 1, m)
    return GradedBasis(n, m, mons, False, {e: i for i, e in enumerate(mons)})


def dim_graded(n: int, m: int) -> int:
    return len(monomial_basis(n, m))


def _lex_key(e):
    return (-sum(e), tuple(-x for x in e))


class Polynomial:
    """Polynomial with exact coefficients; immutable, hashable."""

    __slots__ = ("field", "nvars", "terms", "_hash")

    def __init__(self, field: FieldSpec, nvars: int, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean = {}
        for e, c in items:
            e = tuple(int(x) for x in e)
            if len(e) != nvars or min(e, default=0) < 0:
                raise ValueError(f"bad exponent {e} for {nvars} variables")
            c = field(c)
            if c:
                clean[e] = field(clean.get(e, 0) + c)
                if not clean[e]:
                    del clean[e]
        self.field = field
        self.nvars = nvars
        self.terms = clean
        self._hash = None

    def _new(self, terms: dict):
        # trusted: coefficients already reduced and nonzero
        obj = object.__new__(type(self))
        obj.field = self.field
        obj.nvars = self.nvars
        obj.terms = terms
        obj._hash = None
        return obj

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, field: FieldSpec, nvars: int):
        return cls(field, nvars)

    @classmethod
    def constant(cls, field: FieldSpec, nvars: int, c=1):
        return cls(field, nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, field: FieldSpec, exps, coeff=1):
        exps = tuple(exps)
        return cls(field, len(exps), {exps: coeff})

    @classmethod
    def variable(cls, field: FieldSpec, nvars: int, i: int):
        e = [0] * nvars
        e[i] = 1
        return cls(field, nvars, {tuple(e): 1})

    @classmethod
    def from_vector(cls, field: FieldSpec, basis: GradedBasis, vec):
        """Polynomial with coordinates ``vec`` in ``basis``."""
        return cls(field, basis.n + 1, ((e, c) for e, c in zip(basis.monomials, vec) if c))

    # -- inspection ------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, e) -> int:
        return self.terms.get(tuple(e), self.field.zero)

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if d is None:
            return len(degs) <= 1
        return degs <= {d}

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _lex_key(t[0]))

    def coordinates(self, basis: GradedBasis) -> list:
        """Coefficient vector in a graded basis; every term must lie in it."""
        vec = [self.field.zero] * len(basis)
        for e, c in self.terms.items():
            try:
                vec[basis.index[e]] = c
            except KeyError:
                raise ValueError(f"term {e} is not in degree {basis.degree}") from None
        return vec

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.field != self.field or other.nvars != self.nvars:
                raise ValueError("polynomials live in different rings")
            return other
        return type(self).constant(self.field, self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        f = self.field
        for e, c in other.terms.items():
            v = f(out.get(e, 0) + c)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        return self._new({e: f(-c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = self.field(c)
        if not c:
            return self._new({})
        f = self.field
        return self._new({e: f(v * c) for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        other = self._coerce(other)
        f = self.field
        acc: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, 0) + c1 * c2
        out = {}
        for e, c in acc.items():
            c = f(c)
            if c:
                out[e] = c
        return self._new(out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        out = type(self).constant(self.field, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.field == other.field and self.nvars == other.nvars and self.terms == other.terms
        if not self.terms:
            return other == 0
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.nvars, frozenset(self.terms.items())))
        return self._hash

    def rename(self, nvars: int, mapping) -> Polynomial:
        """Send variable ``i`` to variable ``mapping[i]`` of a ring with ``nvars`` variables."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * nvars
            for i, k in enumerate(e):
                if k:
                    ne[mapping[i]] += k
            out[tuple(ne)] = c
        return Polynomial(self.field, nvars, out)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self})"

    def _var_names(self):
        return [f"x{i}" for i in range(self.nvars)]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = self._var_names()
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            cs = str(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {"n": self.nvars - 1,
                "terms": [{"exp": list(e), "coeff": self.field.to_str(c)} for e, c in self.sorted_terms()]}

    @classmethod
    def from_json(cls, field: FieldSpec, obj: dict) -> Polynomial:
        nvars = int(obj["n"]) + 1
        return cls(field, nvars, ((tuple(t["exp"]), field.from_str(str(t["coeff"])))
                                  for t in obj["terms"]))


class BiPolynomial(Polynomial):
    """Element of k[x_0..x_n, y_0..y_n] (variables x first, then y)."""

    __slots__ = ()

    @property
    def n(self) -> int:
        return self.nvars // 2 - 1

    @classmethod
    def embed_x(cls, f: Polynomial) -> BiPolynomial:
        k = f.nvars
        return cls(f.field, 2 * k, ((e + (0,) * k, c) for e, c in f.terms.items()))

    @classmethod
    def embed_y(cls, f: Polynomial) -> BiPolynomial:
        k = f.nvars
        return cls(f.field, 2 * k, (((0,) * k + e, c) for e, c in f.terms.items()))

    def split_exponent(self, e):
        k = self.n + 1
        return e[:k], e[k:]

    def bidegrees(self) -> set[tuple[int, int]]:
        return {(sum(x), sum(y)) for x, y in map(self.split_exponent, self.terms)}

    def _var_names(self):
        k = self.n + 1
        return [f"x{i}" for i in range(k)] + [f"y{i}" for i in range(k)]

    def to_json(self) -> dict:
        terms = []
        for e, c in self.sorted_terms():
            x, y = self.split_exponent(e)
            terms.append({"xexp": list(x), "yexp": list(y), "coeff": self.field.to_str(c)})
        return {"n": self.n, "terms": terms}

    @classmethod
    def from_json(cls, field: FieldSpec, obj: dict) -> BiPolynomial:
        k = int(obj["n"]) + 1
        return cls(field, 2 * k, ((tuple(t["xexp"]) + tuple(t["yexp"]), field.from_str(str(t["coeff"])))
                                  for t in obj["terms"]))


def mul(f: Polynomial, g: Polynomial) -> Polynomial:
    return f * g


@lru_cache(maxsize=4096)
def multiplication_matrix(w: Polynomial, a: int) -> ExactMatrix:
    """Matrix of S_{a-d} -> S_a, g -> w*g, in graded-lex bases (d = deg w)."""
    if not w.is_homogeneous():
        raise ValueError("multiplication_matrix needs a homogeneous polynomial")
    f = w.field
    n = w.nvars - 1
    d = w.degree if w else 0
    src = monomial_basis(n, a - d)
    dst = monomial_basis(n, a)
    entries = []
    if w:
        for j, g in enumerate(src):
            for e, c in w.terms.items():
                entries.append((dst.index[tuple(x + y for x, y in zip(e, g))], j, c))
    return ExactMatrix.from_entries(f, len(dst), len(src), entries)


def bigraded_component(F: BiPolynomial, s: int, t: int) -> BiPolynomial:
    """Terms of F of bidegree exactly (s, t)."""
    k = F.n + 1
    return F._new({e: c for e, c in F.terms.items() if sum(e[:k]) == s and sum(e[k:]) == t})


def as_tensor(F: BiPolynomial, s: int, t: int) -> ExactMatrix:
    """F in S_s (x) S_t coordinates: rows index x-monomials, columns y-monomials."""
    n = F.n
    rows = monomial_basis(n, s)
    cols = monomial_basis(n, t)
    entries = []
    for e, c in F.terms.items():
        x, y = F.split_exponent(e)
        if sum(x) != s or sum(y) != t:
            raise ValueError(f"term with bidegree {(sum(x), sum(y))} outside ({s}, {t})")
        entries.append((rows.index[x], cols.index[y], c))
    return ExactMatrix.from_entries(F.field, len(rows), len(cols), entries)


def forms_from_json(field: FieldSpec, objs) -> list[Polynomial]:
    return [Polynomial.from_json(field, o) for o in objs]


def parse_form(field: FieldSpec, n: int, text: str) -> Polynomial:
    """Parse a form like ``"x0^2 + 3*x0*x1 - x2^2"`` (variables x0..xn)."""
    text = text.replace(" ", "").replace("-", "+-")
    out = Polynomial.zero(field, n + 1)
    for chunk in filter(None, text.split("+")):
        sign = 1
        if chunk.startswith("-"):
            sign, chunk = -1, chunk[1:]
        coeff = 1
        e = [0] * (n + 1)
        for factor in chunk.split("*"):
            if factor.startswith("x"):
                name, _, power = factor[1:].partition("^")
                i = int(name)
                if not 0 <= i <= n:
                    raise ValueError(f"variable x{i} outside x0..x{n}")
                e[i] += int(power) if power else 1
            else:
                coeff *= field.from_str(factor)
        out = out + Polynomial(field, n + 1, {tuple(e): sign * coeff})
    return out


def ideal_matrix(forms, t: int) -> ExactMatrix:
    """Columns span the degree-t piece of the ideal generated by ``forms``.

    Column block k holds f_k * x^gamma for the monomials gamma of degree t - deg f_k.
    """
    if not forms:
        raise ValueError("need at least one form")
    fld = forms[0].field
    n = forms[0].nvars - 1
    blocks = [multiplication_matrix(f, t) for f in forms if f]
    blocks = [b for b in blocks if b.cols]
    rows = len(monomial_basis(n, t))
    if not blocks:
        return ExactMatrix.zeros(fld, rows, 0)
    return ExactMatrix.block(fld, [blocks])
