import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from beztate.bezoutian import (
    bezout_coefficients,
    bezout_slice,
    bezoutian,
    divided_difference,
    power_bezoutian_expected,
)
from beztate.exact_linalg import DEFAULT_FIELD, QQ, ExactMatrix
from beztate.poly import BiPolynomial, Polynomial, monomial_basis, multiplication_matrix, parse_form
from helpers import powers, random_form, random_forms, var
from oracles import sympy_bezoutian, sympy_terms

F = QQ


def bi(n, i):
    return BiPolynomial.variable(F, 2 * (n + 1), i)


def split_terms(delta, k):
    return {(e[:k], e[k:]): c for e, c in delta.terms.items()}


class TestDividedDifference:
    def test_square_first_slot(self):
        x0 = var(F, 1, 0)
        assert divided_difference(x0 ** 2, 0) == bi(1, 0) + bi(1, 2)

    def test_independent_variable(self):
        assert divided_difference(var(F, 1, 0) ** 2, 1).is_zero()

    def test_mixed_monomial(self):
        assert divided_difference(var(F, 1, 0) * var(F, 1, 1), 1) == bi(1, 2)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            divided_difference(var(F, 1, 0), 2)


class TestBezoutian:
    def test_linear_forms(self):
        B = bezoutian([var(F, 1, 0), var(F, 1, 1)])
        assert B.delta == BiPolynomial.constant(F, 4, 1)
        assert B.rho == 0

    def test_squares(self):
        x0, x1, y0, y1 = (bi(1, i) for i in range(4))
        B = bezoutian([var(F, 1, 0) ** 2, var(F, 1, 1) ** 2])
        assert B.delta == x0 * x1 + x0 * y1 + y0 * x1 + y0 * y1

    def test_repeated_form(self):
        f = var(F, 1, 0) ** 2
        assert bezoutian([f, f]).delta.is_zero()

    def test_rejects_mixed_degrees(self):
        with pytest.raises(ValueError):
            bezoutian([var(F, 1, 0), var(F, 1, 1) ** 2])

    def test_rejects_inhomogeneous(self):
        with pytest.raises(ValueError):
            bezoutian([var(F, 1, 0) ** 2 + var(F, 1, 1), var(F, 1, 1) ** 2])

    def test_rejects_wrong_count(self):
        with pytest.raises(ValueError):
            bezoutian([var(F, 1, 0) ** 2])

    def test_frozen_binary_quadrics(self):
        # values computed by the sympy oracle
        B = bezoutian([parse_form(F, 1, "x0^2 + x1^2"), parse_form(F, 1, "x0*x1")])
        assert split_terms(B.delta, 2) == {
            ((0, 0), (2, 0)): 1, ((0, 1), (0, 1)): -1, ((0, 2), (0, 0)): -1, ((1, 0), (1, 0)): 1}

    def test_frozen_ternary_quadrics(self):
        forms = [parse_form(F, 2, s) for s in ("x0^2 - x1*x2", "x1^2 + 2*x0*x2", "x2^2 + x0*x1")]
        got = split_terms(bezoutian(forms).delta, 3)
        assert got == {
            ((0, 0, 0), (1, 1, 1)): 1, ((0, 0, 0), (3, 0, 0)): -2, ((0, 0, 1), (1, 1, 0)): -1,
            ((0, 0, 2), (0, 0, 1)): 2, ((0, 0, 3), (0, 0, 0)): 2, ((0, 1, 0), (0, 2, 0)): 1,
            ((0, 1, 0), (1, 0, 1)): 1, ((0, 1, 1), (1, 0, 0)): -1, ((0, 2, 0), (0, 1, 0)): 1,
            ((1, 0, 0), (0, 1, 1)): 1, ((1, 0, 0), (2, 0, 0)): -2, ((1, 0, 1), (0, 1, 0)): 1,
            ((1, 1, 0), (0, 0, 1)): 1, ((1, 1, 1), (0, 0, 0)): 1}

    @pytest.mark.parametrize("seed", range(6))
    def test_matches_sympy_oracle(self, seed):
        rng = random.Random(seed)
        n, d = rng.choice([(1, 2), (1, 3), (2, 2)])
        forms = random_forms(F, n, d, n + 1, rng)
        xs = sympy.symbols(f"x0:{n + 1}")
        exprs = [sum(int(c) * sympy.prod([v ** k for v, k in zip(xs, e)]) for e, c in f.terms.items())
                 for f in forms]
        expr, xsym, ysym = sympy_bezoutian(exprs, n)
        assert split_terms(bezoutian(forms).delta, n + 1) == sympy_terms(expr, xsym, ysym)


class TestCoefficientsAndSlices:
    def test_coefficients_of_squares(self):
        B = bezoutian([var(F, 1, 0) ** 2, var(F, 1, 1) ** 2])
        x0, x1 = var(F, 1, 0), var(F, 1, 1)
        assert bezout_coefficients(B) == {(0, 0): x0 * x1, (1, 0): x1, (0, 1): x0,
                                          (1, 1): Polynomial.constant(F, 2, 1)}

    def test_coefficients_of_linear(self):
        B = bezoutian([var(F, 1, 0), var(F, 1, 1)])
        assert bezout_coefficients(B) == {(0, 0): Polynomial.constant(F, 2, 1)}

    def test_coefficients_vanish_above_rho(self):
        rng = random.Random(3)
        B = bezoutian(random_forms(F, 2, 2, 3, rng))
        assert all(sum(alpha) <= B.rho for alpha in bezout_coefficients(B))
        for alpha, c in bezout_coefficients(B).items():
            assert c.is_homogeneous(B.rho - sum(alpha))

    def test_slice_of_squares(self):
        B = bezoutian([var(F, 1, 0) ** 2, var(F, 1, 1) ** 2])
        assert bezout_slice(B, 1).tolist() == [[0, 1], [1, 0]]

    def test_slice_above_rho(self):
        B = bezoutian([var(F, 1, 0) ** 2, var(F, 1, 1) ** 2])
        assert bezout_slice(B, B.rho + 1).is_zero()
        assert bezout_slice(B, -1).is_zero()

    def test_slice_with_common_zero(self):
        x0, x1 = var(F, 1, 0), var(F, 1, 1)
        B = bezoutian([x0 ** 2, x0 * x1])
        assert B.delta == bi(1, 0) * bi(1, 2) + bi(1, 2) ** 2
        assert bezout_slice(B, 1).tolist() == [[1, 0], [0, 0]]


@pytest.mark.parametrize("n,d", [(1, 2), (1, 3), (2, 2), (2, 3)])
def test_power_fixture(n, d):
    assert bezoutian(powers(F, n, d)).delta == power_bezoutian_expected(F, n, d)


# ---------------------------------------------------------------------------
# properties over GF(32003)

G = DEFAULT_FIELD
shapes = st.sampled_from([(1, 1), (1, 2), (1, 3), (2, 2), (2, 1)])


def _x_minus_y_combination(f, n):
    k = n + 1
    total = BiPolynomial.zero(G, 2 * k)
    for j in range(k):
        total = total + divided_difference(f, j) * (BiPolynomial.variable(G, 2 * k, j)
                                                    - BiPolynomial.variable(G, 2 * k, k + j))
    return total


@given(st.integers(0, 10 ** 6), shapes)
def test_telescoping(seed, shape):
    n, d = shape
    f = random_form(G, n, d, random.Random(seed), 0.7)
    assert _x_minus_y_combination(f, n) == BiPolynomial.embed_x(f) - BiPolynomial.embed_y(f)


@given(st.integers(0, 10 ** 6), shapes)
def test_total_degree(seed, shape):
    n, d = shape
    B = bezoutian(random_forms(G, n, d, n + 1, random.Random(seed)))
    assert B.delta.is_zero() or B.delta.is_homogeneous(B.rho)


@given(st.integers(0, 10 ** 6), shapes, st.data())
def test_multilinear_and_alternating(seed, shape, data):
    n, d = shape
    rng = random.Random(seed)
    forms = random_forms(G, n, d, n + 1, rng)
    slot = data.draw(st.integers(0, n))
    g = random_form(G, n, d, rng)
    c = G.random_element(rng)
    mixed = list(forms)
    mixed[slot] = forms[slot] + g.scale(c)
    other = list(forms)
    other[slot] = g
    assert bezoutian(mixed).delta == bezoutian(forms).delta + bezoutian(other).delta.scale(c)
    if n >= 1:
        i, j = sorted(data.draw(st.lists(st.integers(0, n), min_size=2, max_size=2, unique=True)))
        swapped = list(forms)
        swapped[i], swapped[j] = forms[j], forms[i]
        assert bezoutian(swapped).delta == -bezoutian(forms).delta
        repeated = list(forms)
        repeated[j] = forms[i]
        assert bezoutian(repeated).delta.is_zero()


@settings(max_examples=15)
@given(st.integers(0, 10 ** 6), st.sampled_from([(1, 2), (1, 3), (2, 2)]), st.data())
def test_cross_identity(seed, shape, data):
    # sum_i (-1)^i [ (f_i * .) (x) 1 ] Delta^i_{rho-a-d, a+d} = sum_i (-1)^i [ 1 (x) (f_i * .) ] Delta^i_{rho-a, a}
    n, d = shape
    rng = random.Random(seed)
    forms = random_forms(G, n, d, n + 2, rng)
    rho = (n + 1) * (d - 1)
    a = data.draw(st.integers(-d, rho))
    lhs = ExactMatrix.zeros(G, len(monomial_basis(n, rho - a)), len(monomial_basis(n, a + d)))
    rhs = lhs
    for i, f in enumerate(forms):
        B = bezoutian(forms[:i] + forms[i + 1:], d=d)
        s = -1 if i % 2 else 1
        lhs = lhs + (multiplication_matrix(f, rho - a) @ bezout_slice(B, a + d)).scale(s)
        rhs = rhs + (bezout_slice(B, a) @ multiplication_matrix(f, a + d).T).scale(s)
    assert lhs == rhs
