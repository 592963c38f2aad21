"""Divided differences and the Bezoutian of n+1 forms of equal degree.

Rows of the Bezoutian matrix are indexed by the forms f_i and columns by
the divided-difference position j, so ``delta = det(Delta_j(f_i))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .exact_linalg import ExactMatrix
from .poly import BiPolynomial, Polynomial, as_tensor, bigraded_component, monomial_basis


def divided_difference(f: Polynomial, j: int) -> BiPolynomial:
    """Exact quotient of f(y_0..y_{j-1}, x_j..x_n) - f(y_0..y_j, x_{j+1}..x_n) by x_j - y_j."""
    k = f.nvars
    if not 0 <= j < k:
        raise ValueError(f"position {j} outside 0..{k - 1}")
    # variable i of S goes to x_i = i or y_i = k + i in the bigraded ring
    upper = f.rename(2 * k, [k + i if i < j else i for i in range(k)])
    lower = f.rename(2 * k, [k + i if i <= j else i for i in range(k)])
    num = BiPolynomial(f.field, 2 * k, (upper - lower).terms)
    return _divide_by_difference(num, j, k + j)


def _divide_by_difference(num: BiPolynomial, xv: int, yv: int) -> BiPolynomial:
    # synthetic division in the variable xv by (xv - yv)
    fld = num.field
    nv = num.nvars
    by_power: dict[int, dict] = {}
    for e, c in num.terms.items():
        rest = e[:xv] + (0,) + e[xv + 1:]
        by_power.setdefault(e[xv], {})[rest] = c
    if not by_power:
        return BiPolynomial.zero(fld, nv)
    top = max(by_power)
    y = BiPolynomial.variable(fld, nv, yv)
    coeff = {e: BiPolynomial(fld, nv, t) for e, t in by_power.items()}
    zero = BiPolynomial.zero(fld, nv)
    q: dict[int, BiPolynomial] = {}
    carry = zero
    for power in range(top, 0, -1):
        carry = coeff.get(power, zero) + y * carry
        q[power - 1] = carry
    if coeff.get(0, zero) + y * carry:
        raise ArithmeticError("divided difference is not exact")
    out: dict = {}
    for power, poly in q.items():
        for e, c in poly.terms.items():
            out[e[:xv] + (power,) + e[xv + 1:]] = c
    return BiPolynomial(fld, nv, out)


def _det(m: list[list[BiPolynomial]]) -> BiPolynomial:
    size = len(m)
    if size == 1:
        return m[0][0]
    total = None
    for c in range(size):
        if not m[0][c]:
            continue
        minor = [row[:c] + row[c + 1:] for row in m[1:]]
        term = m[0][c] * _det(minor)
        term = term if c % 2 == 0 else -term
        total = term if total is None else total + term
    if total is None:
        return m[0][0]._new({})
    return total


@dataclass(frozen=True)
class BezoutData:
    forms: tuple[Polynomial, ...]
    delta: BiPolynomial
    n: int
    d: int

    @property
    def rho(self) -> int:
        return (self.n + 1) * (self.d - 1)

    @property
    def field(self):
        return self.delta.field


def _check_forms(forms: Sequence[Polynomial], count: int | None = None) -> tuple[int, int]:
    if not forms:
        raise ValueError("need at least one form")
    fld = forms[0].field
    k = forms[0].nvars
    if count is not None and len(forms) != count:
        raise ValueError(f"expected {count} forms, got {len(forms)}")
    degs = set()
    for f in forms:
        if f.field != fld or f.nvars != k:
            raise ValueError("forms must share a field and a polynomial ring")
        if not f.is_homogeneous():
            raise ValueError(f"form {f} is not homogeneous")
        if f:
            degs.add(f.degree)
    if len(degs) > 1:
        raise ValueError(f"forms have mixed degrees {sorted(degs)}")
    return k - 1, (degs.pop() if degs else -1)


def bezoutian(forms: Sequence[Polynomial], d: int | None = None) -> BezoutData:
    """Bezoutian of n+1 forms of common degree d >= 1 in n+1 variables.

    ``d`` must be given when every form is zero (the degree is then not
    readable from the input).
    """
    forms = tuple(forms)
    n, deg = _check_forms(forms, count=forms[0].nvars if forms else None)
    if d is None:
        if deg < 0:
            raise ValueError("cannot infer the degree of zero forms; pass d")
        d = deg
    elif deg >= 0 and deg != d:
        raise ValueError(f"forms have degree {deg}, expected {d}")
    if d < 1:
        raise ValueError("forms must have degree >= 1")
    return _bezoutian_cached(forms, d)


@lru_cache(maxsize=8192)
def _bezoutian_cached(forms: tuple[Polynomial, ...], d: int) -> BezoutData:
    n = forms[0].nvars - 1
    matrix = [[divided_difference(f, j) for j in range(n + 1)] for f in forms]
    return BezoutData(forms, _det(matrix), n, d)


def bezout_coefficients(B: BezoutData) -> dict[tuple, Polynomial]:
    """The Delta_alpha(x) with delta = sum_alpha Delta_alpha(x) y^alpha."""
    k = B.n + 1
    groups: dict[tuple, dict] = {}
    for e, c in B.delta.terms.items():
        groups.setdefault(e[k:], {})[e[:k]] = c
    return {alpha: Polynomial(B.field, k, t) for alpha, t in groups.items()}


@lru_cache(maxsize=16384)
def bezout_slice(B: BezoutData, a: int) -> ExactMatrix:
    """Bidegree (rho - a, a) piece of delta in S_{rho-a} (x) S_a coordinates."""
    rho = B.rho
    if a < 0 or a > rho:
        return ExactMatrix.zeros(B.field, len(monomial_basis(B.n, rho - a)), len(monomial_basis(B.n, a)))
    return as_tensor(bigraded_component(B.delta, rho - a, a), rho - a, a)


def power_bezoutian_expected(fld, n: int, d: int) -> BiPolynomial:
    """sum over beta <= (d-1,..,d-1) of x^beta y^((d-1,..,d-1) - beta)."""
    from itertools import product

    terms = {}
    for beta in product(range(d), repeat=n + 1):
        terms[tuple(beta) + tuple(d - 1 - b for b in beta)] = 1
    return BiPolynomial(fld, 2 * (n + 1), terms)
