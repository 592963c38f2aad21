"""Koszul complexes of degree-d forms, syzygies and the Bezoutian dualities.

K_i in internal degree b is wedge^i(e_0..e_m) (x) S_{b-id}, ordered
wedge-major; the differential is e_J (x) g -> sum_r (-1)^r e_{J - j_r} (x) f_{j_r} g
(0-based r).  R = S/I with I = <f_0..f_m>.  Degreewise bases of R are the
monomials that are not pivots of the row-reduced coefficient matrix of
I_b; the same reduction gives the normal-form map S_b -> R_b, and the
rows of that map are the dual basis of R*_b (functionals vanishing on I_b).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Sequence

from .bezoutian import bezout_slice, bezoutian
from .exact_linalg import ExactMatrix, image_basis, is_nondegenerate_pairing, kernel_basis, rank, rref
from .exterior import contractions, wedge_basis, wedge_position
from .poly import Polynomial, dim_graded, ideal_matrix, monomial_basis, multiplication_matrix
from .report import Report
from .tate import BasepointCertificate, check_basepoint_free


@dataclass(frozen=True)
class KoszulSetup:
    forms: tuple[Polynomial, ...]
    n: int
    d: int

    @property
    def m(self) -> int:
        return len(self.forms) - 1

    @property
    def sigma(self) -> int:
        return (self.m + 1) * self.d - (self.n + 1)

    @property
    def rho(self) -> int:
        return (self.n + 1) * (self.d - 1)

    @property
    def field(self):
        return self.forms[0].field

    def certificate(self) -> BasepointCertificate:
        return _certificate(self)


def koszul_setup(forms: Sequence[Polynomial]) -> KoszulSetup:
    """Validate linearly independent forms of one degree d >= 1."""
    forms = tuple(forms)
    if not forms:
        raise ValueError("need at least one form")
    n = forms[0].nvars - 1
    degs = {f.degree for f in forms}
    if any(not f or not f.is_homogeneous() for f in forms) or len(degs) != 1:
        raise ValueError("forms must be nonzero and homogeneous of one degree")
    if any(f.nvars != n + 1 or f.field != forms[0].field for f in forms):
        raise ValueError("forms must share a ring")
    d = degs.pop()
    if d < 1:
        raise ValueError("forms must have degree >= 1")
    coords = ExactMatrix.from_columns(forms[0].field, [f.coordinates(monomial_basis(n, d)) for f in forms],
                                      dim_graded(n, d))
    if rank(coords) != len(forms):
        raise ValueError("forms are linearly dependent")
    return KoszulSetup(forms, n, d)


@lru_cache(maxsize=None)
def _certificate(setup: KoszulSetup) -> BasepointCertificate:
    return check_basepoint_free(setup.forms)


def _require_certificate(setup: KoszulSetup):
    cert = setup.certificate()
    if not cert.certified:
        raise ValueError("forms are not certified basepoint-free")
    return cert


# ---------------------------------------------------------------------------
# Koszul complex


def koszul_dim(setup: KoszulSetup, i: int, b: int) -> int:
    k = setup.m + 1
    if not 0 <= i <= k:
        return 0
    return comb(k, i) * dim_graded(setup.n, b - i * setup.d)


@lru_cache(maxsize=4096)
def koszul_slice(setup: KoszulSetup, i: int, b: int) -> ExactMatrix:
    """K_i -> K_{i-1} in internal degree b."""
    fld, n, d = setup.field, setup.n, setup.d
    k = setup.m + 1
    rows, cols = koszul_dim(setup, i - 1, b), koszul_dim(setup, i, b)
    if rows == 0 or cols == 0:
        return ExactMatrix.zeros(fld, rows, cols)
    src, dst = b - i * d, b - (i - 1) * d
    ds, dd = dim_graded(n, src), dim_graded(n, dst)
    out = fld.zeros((rows, cols))
    pos = wedge_position(k, i - 1)
    for cw, J in enumerate(wedge_basis(k, i)):
        for sign, j, rest in contractions(J):
            r0, c0 = pos[rest] * dd, cw * ds
            out[r0:r0 + dd, c0:c0 + ds] += sign * multiplication_matrix(setup.forms[j], dst).data
    return ExactMatrix._wrap(fld, fld.reduce_array(out))


def homology_dim(setup: KoszulSetup, i: int, b: int) -> int:
    """dim H_i(K)_b."""
    dim = koszul_dim(setup, i, b)
    if dim == 0:
        return 0
    out_rank = rank(koszul_slice(setup, i, b)) if i > 0 else 0
    in_rank = rank(koszul_slice(setup, i + 1, b))
    return dim - out_rank - in_rank


def _tuple_from_vector(setup: KoszulSetup, vec, b: int) -> tuple[Polynomial, ...]:
    basis = monomial_basis(setup.n, b - setup.d)
    size = len(basis)
    return tuple(Polynomial.from_vector(setup.field, basis, vec[j * size:(j + 1) * size])
                 for j in range(setup.m + 1))


def _vector_from_tuple(setup: KoszulSetup, entries: Sequence[Polynomial], b: int) -> list:
    basis = monomial_basis(setup.n, b - setup.d)
    out = []
    for A in entries:
        out.extend(A.coordinates(basis) if A else [setup.field.zero] * len(basis))
    return out


@dataclass(frozen=True)
class SyzygySpace:
    degree: int
    basis: tuple[tuple[Polynomial, ...], ...]
    koszul_subspace: tuple[tuple[Polynomial, ...], ...]

    @property
    def quotient_dim(self) -> int:
        return len(self.basis) - len(self.koszul_subspace)

    def to_json(self) -> dict:
        return {"degree": self.degree,
                "basis": [[A.to_json() for A in s] for s in self.basis],
                "koszul_subspace": [[A.to_json() for A in s] for s in self.koszul_subspace]}


def syzygy_space(setup: KoszulSetup, b: int) -> SyzygySpace:
    """Syz(f)_b = ker(K_1 -> K_0)_b together with the Koszul syzygies Im(K_2 -> K_1)_b."""
    syz = kernel_basis(koszul_slice(setup, 1, b)) if koszul_dim(setup, 1, b) else []
    kosz = image_basis(koszul_slice(setup, 2, b))
    return SyzygySpace(b, tuple(_tuple_from_vector(setup, v, b) for v in syz),
                       tuple(_tuple_from_vector(setup, v, b) for v in kosz))


# ---------------------------------------------------------------------------
# the quotient ring R = S/I degreewise


@lru_cache(maxsize=4096)
def normal_form(forms: tuple[Polynomial, ...], b: int) -> tuple[ExactMatrix, tuple[int, ...]]:
    """(NF, standard) with NF: S_b -> R_b in the coset basis of standard monomials.

    ``standard`` lists the indices (in the degree-b monomial basis) of the
    monomials whose cosets form the basis of R_b.
    """
    fld = forms[0].field
    n = forms[0].nvars - 1
    size = dim_graded(n, b)
    G = ideal_matrix(list(forms), b)
    if G.cols:
        R, piv = rref(G.T)
    else:
        R, piv = None, []
    pivset = set(piv)
    standard = tuple(c for c in range(size) if c not in pivset)
    col_of = {c: k for k, c in enumerate(standard)}
    entries = [(col_of[c], c, 1) for c in standard]
    for r, pc in enumerate(piv):
        for c in standard:
            v = R.data[r, c]
            if v:
                entries.append((col_of[c], pc, fld(-v)))
    return ExactMatrix.from_entries(fld, len(standard), size, entries), standard


def quotient_dim(setup: KoszulSetup, b: int) -> int:
    return len(normal_form(setup.forms, b)[1])


def dual_quotient_basis(forms: tuple[Polynomial, ...], b: int) -> list[list]:
    """Basis of R*_b as value vectors on the monomials of S_b."""
    NF, _ = normal_form(forms, b)
    return [list(NF.field(v) for v in row) for row in NF.data]


def vanishes_on_ideal(forms: Sequence[Polynomial], b: int, phi: Sequence) -> bool:
    G = ideal_matrix(list(forms), b)
    if G.cols == 0:
        return True
    row = ExactMatrix.from_rows(forms[0].field, [list(phi)], G.rows)
    return (row @ G).is_zero()


# ---------------------------------------------------------------------------
# Bezoutian dualities


def bezout_syzygy(setup: KoszulSetup, a: int, phi: Sequence) -> tuple[Polynomial, ...]:
    """(sum_alpha phi(D^0_alpha) x^alpha, -sum phi(D^1_alpha) x^alpha, ...), D^i omitting f_i.

    ``phi`` is a value vector on the monomials of S_{rho-a} and must vanish
    on I_{rho-a}.
    """
    if setup.m != setup.n + 1:
        raise ValueError("Bezout syzygies need exactly n+2 forms")
    fld, n = setup.field, setup.n
    r = setup.rho - a
    phi = [fld(v) for v in phi]
    if len(phi) != dim_graded(n, r):
        raise ValueError(f"phi must have {dim_graded(n, r)} values on S_{r}")
    zero = Polynomial.zero(fld, n + 1)
    if a < 0 or r < 0:
        return (zero,) * (setup.m + 1)
    if not vanishes_on_ideal(setup.forms, r, phi):
        raise ValueError(f"phi does not vanish on I_{r}")
    target = monomial_basis(n, a)
    out = []
    for i in range(setup.m + 1):
        others = setup.forms[:i] + setup.forms[i + 1:]
        T = bezout_slice(bezoutian(others, d=setup.d), a)
        vec = T.T.apply(phi) if T.cols else []
        poly = Polynomial.from_vector(fld, target, vec)
        out.append(poly if i % 2 == 0 else -poly)
    return tuple(out)


def apolarity_matrix(setup: KoszulSetup, a: int) -> ExactMatrix:
    """R*_{rho-a} -> R_a, phi -> sum_{|alpha|=a} phi([Delta_alpha]) [x^alpha].

    Columns follow the dual coset basis of R*_{rho-a}, rows the coset basis of R_a.
    """
    if setup.m != setup.n:
        raise ValueError("the apolarity pairing needs exactly n+1 forms")
    cert = setup.certificate()
    if not cert.certified:
        raise ValueError("forms are not certified to be a regular sequence")
    r = setup.rho - a
    NF_a, _ = normal_form(setup.forms, a)
    NF_r, _ = normal_form(setup.forms, r)
    if a < 0 or r < 0:
        return ExactMatrix.zeros(setup.field, NF_a.rows, NF_r.rows)
    T = bezout_slice(bezoutian(setup.forms, d=setup.d), a)
    return NF_a @ T.T @ NF_r.T


def apolarity_check(setup: KoszulSetup, a: int | None = None) -> Report:
    """dim R_{rho-a} = dim R_a and the Bezoutian pairing is nondegenerate (all 0 <= a <= rho by default)."""
    rep = Report()
    degrees = range(0, setup.rho + 1) if a is None else [a]
    for a in degrees:
        with rep.timed("apolarity", (a,)) as box:
            lo, hi = quotient_dim(setup, setup.rho - a), quotient_dim(setup, a)
            M = apolarity_matrix(setup, a)
            ok = lo == hi and is_nondegenerate_pairing(M)
            box["ok"] = ok
            box["detail"] = f"dim R_{setup.rho - a} = {lo}, dim R_{a} = {hi}, rank {rank(M)}"
    return rep


def _bezout_syzygy_vectors(setup: KoszulSetup, a: int) -> list[list]:
    b = a + setup.d
    r = setup.rho - a
    if a < 0 or r < 0:
        return []
    return [_vector_from_tuple(setup, bezout_syzygy(setup, a, phi), b)
            for phi in dual_quotient_basis(setup.forms, r)]


def syzygy_duality_check(setup: KoszulSetup, b: int) -> Report:
    """R*_{rho-a} = Syz_b / Kosz_b with b = a + d, spanned by Bezout syzygies."""
    if setup.m != setup.n + 1:
        raise ValueError("the syzygy duality needs exactly n+2 forms")
    _require_certificate(setup)
    rep = Report()
    a = b - setup.d
    r = setup.rho - a
    fld = setup.field
    with rep.timed("syzygy_duality_dims", (b,)) as box:
        K1 = koszul_slice(setup, 1, b)
        syz_dim = koszul_dim(setup, 1, b) - rank(K1)
        kosz = koszul_slice(setup, 2, b)
        kosz_dim = rank(kosz)
        dual_dim = quotient_dim(setup, r) if r >= 0 else 0
        box["ok"] = dual_dim == syz_dim - kosz_dim
        box["detail"] = f"dim R_{r} = {dual_dim}, dim Syz_{b} = {syz_dim}, dim Kosz_{b} = {kosz_dim}"
    with rep.timed("bezout_syzygies_span", (b,)) as box:
        vecs = _bezout_syzygy_vectors(setup, a)
        if not vecs:
            box["ok"] = syz_dim == kosz_dim
            box["detail"] = "vacuous: no Bezout syzygies in this degree"
        else:
            bez = ExactMatrix.from_columns(fld, vecs, koszul_dim(setup, 1, b))
            in_kernel = (K1 @ bez).is_zero()
            spanned = rank(ExactMatrix.block(fld, [[kosz, bez]])) == syz_dim
            box["ok"] = in_kernel and spanned
            box["detail"] = f"in kernel: {in_kernel}, Kosz + Bezout span Syz: {spanned}"
    return rep


def koszul_duality_check(setup: KoszulSetup, i: int, a: int) -> Report:
    """dim H_i(K)_{sigma-a} = dim H_{m-n-i}(K)_a."""
    k = setup.m - setup.n
    if not 0 <= i <= k:
        raise ValueError(f"i = {i} outside 0..{k}")
    _require_certificate(setup)
    rep = Report()
    lhs = homology_dim(setup, i, setup.sigma - a)
    rhs = homology_dim(setup, k - i, a)
    rep.add("koszul_duality", (i, a), lhs == rhs,
            f"dim H_{i} at {setup.sigma - a} = {lhs}, dim H_{k - i} at {a} = {rhs}")
    return rep


def generation_check(setup: KoszulSetup, b_max: int) -> Report:
    """Degreewise: Syz_b is spanned by Kosz_b and ring multiples of Bezout syzygies of degree <= b."""
    if setup.m != setup.n + 1:
        raise ValueError("generation check needs exactly n+2 forms")
    _require_certificate(setup)
    rep = Report()
    fld, n, d = setup.field, setup.n, setup.d
    bez_by_degree = {a + d: [_tuple_from_vector(setup, v, a + d) for v in _bezout_syzygy_vectors(setup, a)]
                     for a in range(0, setup.rho + 1)}
    for b in range(0, b_max + 1):
        with rep.timed("generation", (b,)) as box:
            dim = koszul_dim(setup, 1, b)
            if dim == 0:
                box["detail"] = "vacuous: K_1 is zero in this degree"
                continue
            K1 = koszul_slice(setup, 1, b)
            syz_dim = dim - rank(K1)
            gens = []
            for b0, tuples in bez_by_degree.items():
                if b0 > b:
                    continue
                for mono in monomial_basis(n, b - b0):
                    x = Polynomial.monomial(fld, mono)
                    for tup in tuples:
                        gens.append(_vector_from_tuple(setup, [A * x for A in tup], b))
            blocks = [koszul_slice(setup, 2, b)]
            if gens:
                blocks.append(ExactMatrix.from_columns(fld, gens, dim))
            spanned = rank(ExactMatrix.block(fld, [blocks]))
            box["ok"] = spanned == syz_dim
            box["detail"] = f"generated {spanned} of dim Syz_{b} = {syz_dim}"
    return rep
