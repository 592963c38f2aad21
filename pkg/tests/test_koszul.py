import random

import pytest
from hypothesis import given, settings, strategies as st

from beztate.bezoutian import bezoutian
from beztate.exact_linalg import DEFAULT_FIELD, QQ, ExactMatrix
from beztate.koszul import (
    apolarity_check,
    apolarity_matrix,
    bezout_syzygy,
    dual_quotient_basis,
    generation_check,
    homology_dim,
    koszul_duality_check,
    koszul_setup,
    koszul_slice,
    normal_form,
    quotient_dim,
    syzygy_duality_check,
    syzygy_space,
    vanishes_on_ideal,
)
from beztate.poly import BiPolynomial, Polynomial, ideal_matrix, monomial_basis
from helpers import as_dict, powers, random_forms, var
from oracles import complete_intersection_hilbert, koszul_homology

F = QQ
G = DEFAULT_FIELD


@pytest.fixture
def squares():
    return koszul_setup(powers(F, 1, 2))


@pytest.fixture
def pencil():
    x, y = var(F, 1, 0), var(F, 1, 1)
    return koszul_setup([x ** 2, y ** 2, x * y])


def syz_sum(setup, tup):
    total = Polynomial.zero(setup.field, setup.n + 1)
    for A, f in zip(tup, setup.forms):
        total = total + A * f
    return total


class TestSetup:
    def test_sigma(self, pencil):
        assert (pencil.m, pencil.sigma, pencil.rho) == (2, 4, 2)

    def test_rejects_dependent(self):
        x = var(F, 1, 0)
        with pytest.raises(ValueError):
            koszul_setup([x ** 2, x ** 2 * 3])

    def test_rejects_mixed_degree(self):
        with pytest.raises(ValueError):
            koszul_setup([var(F, 1, 0), var(F, 1, 1) ** 2])


class TestKoszulSlice:
    def test_two_squares(self, squares):
        assert koszul_slice(squares, 1, 2).tolist() == [[1, 0], [0, 0], [0, 1]]

    def test_bottom(self, squares):
        assert koszul_slice(squares, 0, 2).shape == (0, 3)

    def test_pencil_degree_three(self, pencil):
        assert koszul_slice(pencil, 1, 3).tolist() == [
            [1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 1, 0], [0, 0, 1, 0, 0, 1], [0, 0, 0, 1, 0, 0]]

    def test_second_map_signs(self, pencil):
        # e0 ^ e1 -> f0 e1 - f1 e0
        M = koszul_slice(pencil, 2, 4)
        assert M.shape == (3 * 3, 3)
        col = [M.data[r, 0] for r in range(M.rows)]
        x, y = var(F, 1, 0), var(F, 1, 1)
        basis = monomial_basis(1, 2)
        e0 = Polynomial.from_vector(F, basis, col[0:3])
        e1 = Polynomial.from_vector(F, basis, col[3:6])
        assert (e0, e1) == (-(y ** 2), x ** 2)


class TestHomology:
    def test_quotient_of_squares(self, squares):
        assert [homology_dim(squares, 0, b) for b in range(4)] == [1, 2, 1, 0]

    def test_regular_sequence_is_acyclic(self, squares):
        assert all(homology_dim(squares, i, b) == 0 for i in (1, 2) for b in range(-1, 8))

    def test_pencil_first_homology(self, pencil):
        assert homology_dim(pencil, 1, 3) == 2


class TestSyzygySpace:
    def test_pencil_degree_three(self, pencil):
        s = syzygy_space(pencil, 3)
        assert len(s.basis) == 2 and s.koszul_subspace == ()
        for tup in s.basis:
            assert syz_sum(pencil, tup).is_zero()

    def test_pencil_degree_four(self, pencil):
        s = syzygy_space(pencil, 4)
        assert s.quotient_dim == 1 == quotient_dim(pencil, 0)
        for tup in s.basis + s.koszul_subspace:
            assert syz_sum(pencil, tup).is_zero()

    @pytest.mark.parametrize("b", range(0, 8))
    def test_regular_sequence_has_only_koszul(self, squares, b):
        assert syzygy_space(squares, b).quotient_dim == 0

    def test_json(self, pencil):
        obj = syzygy_space(pencil, 3).to_json()
        assert obj["degree"] == 3 and len(obj["basis"]) == 2 and obj["koszul_subspace"] == []


class TestQuotientRing:
    def test_normal_form_pencil(self, pencil):
        NF, standard = normal_form(pencil.forms, 1)
        assert standard == (0, 1) and NF == ExactMatrix.identity(F, 2)
        assert normal_form(pencil.forms, 2)[1] == ()

    def test_normal_form_kills_ideal(self):
        rng = random.Random(4)
        forms = tuple(random_forms(G, 2, 2, 3, rng))
        for b in range(5):
            NF, _ = normal_form(forms, b)
            assert (NF @ ideal_matrix(list(forms), b)).is_zero()

    def test_dual_basis_vanishes_on_ideal(self, pencil):
        for b in range(4):
            for phi in dual_quotient_basis(pencil.forms, b):
                assert vanishes_on_ideal(pencil.forms, b, phi)


class TestBezoutSyzygy:
    def test_omitted_bezoutians(self, pencil):
        x0, x1, y0, y1 = (BiPolynomial.variable(F, 4, i) for i in range(4))
        f = pencil.forms
        assert bezoutian([f[1], f[2]]).delta == -(x1 ** 2) - x1 * y1
        assert bezoutian([f[0], f[2]]).delta == x0 * y0 + y0 ** 2
        assert bezoutian([f[0], f[1]]).delta == (x0 + y0) * (x1 + y1)

    def test_first_functional(self, pencil):
        x, y = var(F, 1, 0), var(F, 1, 1)
        assert bezout_syzygy(pencil, 1, [1, 0]) == (0 * x, -x, y)

    def test_second_functional(self, pencil):
        x, y = var(F, 1, 0), var(F, 1, 1)
        assert bezout_syzygy(pencil, 1, [0, 1]) == (-y, 0 * x, x)

    def test_zero_functional(self, pencil):
        assert all(A.is_zero() for A in bezout_syzygy(pencil, 1, [0, 0]))

    def test_rejects_functional_not_vanishing_on_ideal(self, pencil):
        with pytest.raises(ValueError):
            bezout_syzygy(pencil, 0, [1, 0, 0])

    def test_rejects_wrong_form_count(self, squares):
        with pytest.raises(ValueError):
            bezout_syzygy(squares, 1, [1])


class TestApolarity:
    def test_middle_degree(self, squares):
        assert apolarity_matrix(squares, 1).tolist() == [[0, 1], [1, 0]]

    def test_bottom_degree(self, squares):
        assert apolarity_matrix(squares, 0).tolist() == [[1]]

    def test_above_socle(self, squares):
        assert apolarity_matrix(squares, 3).shape == (0, 0)

    def test_check_squares(self, squares):
        rep = apolarity_check(squares)
        assert rep.passed and [c.location for c in rep.checks] == [(0,), (1,), (2,)]

    def test_check_cubes(self):
        setup = koszul_setup(powers(F, 1, 3))
        assert [quotient_dim(setup, a) for a in range(5)] == [1, 2, 3, 2, 1]
        assert apolarity_check(setup).passed

    def test_random_ternary_quadrics(self):
        setup = koszul_setup(random_forms(G, 2, 2, 3, random.Random(8)))
        assert setup.certificate().certified
        assert apolarity_check(setup).passed

    def test_rejects_basepoints(self):
        x0, x1 = var(F, 1, 0), var(F, 1, 1)
        with pytest.raises(ValueError):
            apolarity_matrix(koszul_setup([x0 ** 2, x0 * x1]), 1)


class TestSyzygyDuality:
    def test_degree_three(self, pencil):
        rep = syzygy_duality_check(pencil, 3)
        assert rep.passed
        assert "dim R_1 = 2" in rep.checks[0].detail

    def test_degree_four(self, pencil):
        rep = syzygy_duality_check(pencil, 4)
        assert rep.passed and "dim R_0 = 1" in rep.checks[0].detail

    def test_vacuous_high_degree(self, pencil):
        rep = syzygy_duality_check(pencil, 9)
        assert rep.passed and "vacuous" in rep.checks[1].detail


class TestKoszulDuality:
    def test_regular_sequence(self, squares):
        for a in range(-1, 4):
            assert koszul_duality_check(squares, 0, a).passed
            assert homology_dim(squares, 0, squares.sigma - a) == homology_dim(squares, 0, a)

    def test_pencil(self, pencil):
        rep = koszul_duality_check(pencil, 0, 3)
        assert rep.passed
        assert homology_dim(pencil, 0, 1) == 2 == homology_dim(pencil, 1, 3)

    def test_out_of_range(self, pencil):
        with pytest.raises(ValueError):
            koszul_duality_check(pencil, 2, 0)


class TestGeneration:
    def test_pencil(self, pencil):
        assert generation_check(pencil, 6).passed

    def test_padded_regular_sequence(self):
        x, y = var(F, 1, 0), var(F, 1, 1)
        setup = koszul_setup([x ** 2, y ** 2, x * y + 2 * y ** 2])
        assert generation_check(setup, 6).passed

    def test_below_first_syzygy(self, pencil):
        rep = generation_check(pencil, 2 * pencil.d - 1)
        assert rep.passed


# ---------------------------------------------------------------------------
# properties over GF(32003)

setups = st.sampled_from([(1, 2, 0), (1, 2, 1), (1, 3, 1), (2, 2, 0), (2, 2, 1), (2, 2, 2), (2, 1, 0)])


def _random_setup(seed, shape):
    n, d, extra = shape
    return koszul_setup(random_forms(G, n, d, n + 1 + extra, random.Random(seed)))


@given(st.integers(0, 10 ** 6), setups, st.integers(1, 3), st.integers(0, 7))
def test_koszul_d_squared(seed, shape, i, b):
    s = _random_setup(seed, shape)
    assert (koszul_slice(s, i, b) @ koszul_slice(s, i + 1, b)).is_zero()


@settings(max_examples=20)
@given(st.integers(0, 10 ** 6), setups, st.integers(0, 7))
def test_homology_matches_oracle(seed, shape, b):
    s = _random_setup(seed, shape)
    forms = [as_dict(f) for f in s.forms]
    for i in range(0, s.m + 2):
        assert homology_dim(s, i, b) == koszul_homology(forms, s.n, i, b, G.modulus)


@given(st.integers(0, 10 ** 6), st.sampled_from([(1, 2), (1, 3), (2, 2), (2, 1)]))
def test_regular_sequences_are_acyclic(seed, shape):
    n, d = shape
    s = koszul_setup(random_forms(G, n, d, n + 1, random.Random(seed)))
    if not s.certificate().certified:
        return
    rho = (n + 1) * (d - 1)
    for b in range(0, rho + d + 2):
        assert homology_dim(s, 1, b) == 0
        assert homology_dim(s, 0, b) == complete_intersection_hilbert(n, d, b)


@given(st.integers(0, 10 ** 6), setups)
def test_homology_vanishes_where_partner_degree_is_negative(seed, shape):
    s = _random_setup(seed, shape)
    if not s.certificate().certified:
        return
    k = s.m - s.n
    for i in range(1, s.m + 2):
        for b in range(0, s.sigma + 3):
            partner = k - i
            if partner < 0 or s.sigma - b < 0:
                assert homology_dim(s, i, b) == 0


@settings(max_examples=20)
@given(st.integers(0, 10 ** 6), st.sampled_from([(1, 2), (1, 3), (2, 2)]), st.data())
def test_bezout_syzygies_are_syzygies(seed, shape, data):
    n, d = shape
    s = koszul_setup(random_forms(G, n, d, n + 2, random.Random(seed)))
    a = data.draw(st.integers(0, s.rho))
    rng = random.Random(seed + 1)
    basis = dual_quotient_basis(s.forms, s.rho - a)
    phi = [0] * len(monomial_basis(n, s.rho - a))
    for row in basis:
        c = rng.randrange(G.modulus)
        phi = [G(u + c * v) for u, v in zip(phi, row)]
    tup = bezout_syzygy(s, a, phi)
    assert syz_sum(s, tup).is_zero()
    assert all(A.is_zero() or A.is_homogeneous(a) for A in tup)
