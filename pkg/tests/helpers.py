"""Small builders shared across test modules."""

from __future__ import annotations

import random

from beztate.exact_linalg import DEFAULT_FIELD
from beztate.poly import Polynomial, monomial_basis


def var(fld, n: int, i: int) -> Polynomial:
    return Polynomial.variable(fld, n + 1, i)


def powers(fld, n: int, d: int) -> list[Polynomial]:
    """x_0^d, ..., x_n^d."""
    return [Polynomial.monomial(fld, tuple(d if k == i else 0 for k in range(n + 1))) for i in range(n + 1)]


def random_form(fld, n: int, d: int, rng: random.Random, density: float = 1.0) -> Polynomial:
    terms = {}
    for e in monomial_basis(n, d):
        if rng.random() < density:
            terms[e] = fld.random_element(rng)
    f = Polynomial(fld, n + 1, terms)
    return f if f else random_form(fld, n, d, rng, density)


def random_forms(fld, n: int, d: int, k: int, rng: random.Random) -> list[Polynomial]:
    return [random_form(fld, n, d, rng) for _ in range(k)]


def as_dict(f: Polynomial, p: int = DEFAULT_FIELD.modulus) -> dict:
    """Plain {exponent: int} view for the oracles."""
    return {e: int(c) % p for e, c in f.terms.items()}
