"""Degree slices of the Tate resolution of the Veronese push-forward of O(ell).

For a = ell + (p+1)d and rho = (n+1)(d-1) the p-th term in internal degree
t is

    top    = wedge^{t+n-p} W (x) S*_{rho-a}
    bottom = wedge^{t-p}   W (x) S_{a-d}

and the differential is the block matrix [[alpha, 0], [s(p) B, beta]] with
s(p) = (-1)^p.  W is S_d with its monomial basis, or an ordered list of
forms spanning a subspace U.  Every tensor space is ordered wedge-major,
then by the graded-lex monomial basis; functionals on S_m are value
vectors on its monomial basis.

Sign conventions.  alpha and beta remove the r-th factor (0-based) of a
wedge with sign (-1)^r.  The Bezoutian block sends omega (x) phi to
sum sign(J|I) J (x) (phi (x) 1)(Delta_{rho-a,a}(f_I)) over all ways of
writing omega = sign(J|I) w_J ^ w_I with |I| = n+1, i.e. the n+1 factors
fed to the Bezoutian are split off on the right.  With these choices
B_{p+1} alpha_p = beta_{p+1} B_p holds on the nose for every n.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from math import comb
from typing import Callable, Sequence

from .bezoutian import bezout_slice, bezoutian
from .exact_linalg import ExactMatrix, FieldSpec, rank
from .exterior import contractions, split, wedge_basis, wedge_position
from .poly import Polynomial, dim_graded, ideal_matrix, monomial_basis, multiplication_matrix
from .report import Report

SIGN_CONVENTIONS: dict[str, Callable[[int], int]] = {
    "alternating": lambda p: -1 if p % 2 else 1,
    "flipped": lambda p: 1 if p % 2 else -1,
    "none": lambda p: 1,
}


class SubspaceError(ValueError):
    """The subspace U is not usable (dependent, wrong degree, ...)."""


class BasepointError(ValueError):
    """Basepoint-freeness of U could not be certified within the search bound."""


@dataclass(frozen=True)
class TateConfig:
    field: FieldSpec
    n: int
    d: int
    ell: int
    p_range: tuple[int, int]
    subspace: tuple[Polynomial, ...] | None = None

    def __post_init__(self):
        if self.n < 0 or self.d < 1:
            raise ValueError("need n >= 0 and d >= 1")
        if self.p_range[0] > self.p_range[1]:
            raise ValueError(f"empty p-range {self.p_range}")
        object.__setattr__(self, "p_range", (int(self.p_range[0]), int(self.p_range[1])))
        if self.subspace is not None:
            object.__setattr__(self, "subspace", tuple(self.subspace))

    @property
    def rho(self) -> int:
        return (self.n + 1) * (self.d - 1)

    def a(self, p: int) -> int:
        return self.ell + (p + 1) * self.d

    @property
    def forms(self) -> tuple[Polynomial, ...]:
        """Ordered basis of W (degree-d monomials) or of the subspace U."""
        return _basis_forms(self)

    @property
    def N(self) -> int:
        return len(self.forms)

    def to_json(self) -> dict:
        return {"field": str(self.field), "n": self.n, "d": self.d, "ell": self.ell,
                "p_range": list(self.p_range),
                "subspace": None if self.subspace is None else [f.to_json() for f in self.subspace]}

    @classmethod
    def from_json(cls, obj: dict) -> TateConfig:
        fld = FieldSpec.parse(obj["field"])
        sub = obj.get("subspace")
        return cls(fld, int(obj["n"]), int(obj["d"]), int(obj["ell"]), tuple(obj["p_range"]),
                   None if sub is None else tuple(Polynomial.from_json(fld, s) for s in sub))


@lru_cache(maxsize=None)
def _basis_forms(cfg: TateConfig) -> tuple[Polynomial, ...]:
    if cfg.subspace is not None:
        return cfg.subspace
    return tuple(Polynomial.monomial(cfg.field, e) for e in monomial_basis(cfg.n, cfg.d))


@dataclass(frozen=True)
class SummandDescriptor:
    p: int
    a: int
    top_dim: int
    bottom_dim: int
    generator_degrees: tuple[int, int]

    def to_json(self) -> dict:
        return {"p": self.p, "a": self.a, "top_dim": self.top_dim, "bottom_dim": self.bottom_dim,
                "generator_degrees": list(self.generator_degrees)}


def summand_dims(cfg: TateConfig, p: int) -> SummandDescriptor:
    """Multiplicities dim S*_{rho-a} (top) and dim S_{a-d} (bottom) of the two summands."""
    a = cfg.a(p)
    return SummandDescriptor(p, a, dim_graded(cfg.n, cfg.rho - a), dim_graded(cfg.n, a - cfg.d),
                             (cfg.N - cfg.n + p, cfg.N + p))


def slice_dims(cfg: TateConfig, p: int, t: int) -> tuple[int, int]:
    """(top, bottom) dimensions of the p-th term in internal degree t."""
    a = cfg.a(p)
    top = comb_safe(cfg.N, t + cfg.n - p) * dim_graded(cfg.n, cfg.rho - a)
    bottom = comb_safe(cfg.N, t - p) * dim_graded(cfg.n, a - cfg.d)
    return top, bottom


def comb_safe(N: int, i: int) -> int:
    return comb(N, i) if 0 <= i <= N else 0


# ---------------------------------------------------------------------------
# slice builders


def _contraction_map(cfg: TateConfig, i: int, src_deg: int, dst_deg: int, block) -> ExactMatrix:
    """wedge^i (x) S_src -> wedge^{i-1} (x) S_dst, omega (x) g -> sum (-1)^r rest (x) block(w_k) g."""
    fld = cfg.field
    N = cfg.N
    ds, dd = dim_graded(cfg.n, src_deg), dim_graded(cfg.n, dst_deg)
    rows, cols = comb_safe(N, i - 1) * dd, comb_safe(N, i) * ds
    if rows == 0 or cols == 0:
        return ExactMatrix.zeros(fld, rows, cols)
    out = fld.zeros((rows, cols))
    pos = wedge_position(N, i - 1)
    forms = cfg.forms
    for cw, omega in enumerate(wedge_basis(N, i)):
        for sign, k, rest in contractions(omega):
            r0, c0 = pos[rest] * dd, cw * ds
            out[r0:r0 + dd, c0:c0 + ds] += sign * block(forms[k])
    return ExactMatrix._wrap(fld, fld.reduce_array(out))


def alpha_slice(cfg: TateConfig, p: int, t: int) -> ExactMatrix:
    """wedge^i W (x) S*_{rho-a} -> wedge^{i-1} W (x) S*_{rho-a-d}, i = t+n-p.

    Each w acts on functionals by (w.phi)(g) = phi(w g), the transpose of
    multiplication by w.
    """
    src = cfg.rho - cfg.a(p)
    return _contraction_map(cfg, t + cfg.n - p, src, src - cfg.d,
                            lambda w: multiplication_matrix(w, src).data.T)


def beta_slice(cfg: TateConfig, p: int, t: int) -> ExactMatrix:
    """wedge^i W (x) S_{a-d} -> wedge^{i-1} W (x) S_a, i = t-p, by multiplication."""
    a = cfg.a(p)
    return _contraction_map(cfg, t - p, a - cfg.d, a,
                            lambda w: multiplication_matrix(w, a).data)


def bezout_map_slice(cfg: TateConfig, p: int, t: int) -> ExactMatrix:
    """wedge^{n+1+m} W (x) S*_{rho-a} -> wedge^m W (x) S_a with m = t-p-1 (unsigned B_p)."""
    fld, N, n = cfg.field, cfg.N, cfg.n
    a = cfg.a(p)
    m = t - p - 1
    i = n + 1 + m
    ds, dd = dim_graded(n, cfg.rho - a), dim_graded(n, a)
    rows, cols = comb_safe(N, m) * dd, comb_safe(N, i) * ds
    if rows == 0 or cols == 0:
        return ExactMatrix.zeros(fld, rows, cols)
    out = fld.zeros((rows, cols))
    pos = wedge_position(N, m)
    forms = cfg.forms
    for cw, omega in enumerate(wedge_basis(N, i)):
        for left, right, sign in split(omega, m):
            B = bezoutian(tuple(forms[k] for k in right), d=cfg.d)
            blk = bezout_slice(B, a).data.T
            r0, c0 = pos[left] * dd, cw * ds
            out[r0:r0 + dd, c0:c0 + ds] += sign * blk
    return ExactMatrix._wrap(fld, fld.reduce_array(out))


def differential_slice(cfg: TateConfig, p: int, t: int, sign_convention: str = "alternating") -> ExactMatrix:
    """The block matrix [[alpha_p, 0], [s(p) B_p, beta_p]] in internal degree t."""
    fld = cfg.field
    s = SIGN_CONVENTIONS[sign_convention](p)
    top0, bot0 = slice_dims(cfg, p, t)
    top1, bot1 = slice_dims(cfg, p + 1, t)
    alpha = alpha_slice(cfg, p, t)
    B = bezout_map_slice(cfg, p, t)
    beta = beta_slice(cfg, p, t)
    assert alpha.shape == (top1, top0) and B.shape == (bot1, top0) and beta.shape == (bot1, bot0)
    return ExactMatrix.block(fld, [[alpha, ExactMatrix.zeros(fld, top1, bot0)],
                                   [B.scale(s) if s != 1 else B, beta]])


# ---------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class BasepointCertificate:
    certified: bool
    degree: int | None
    t_max: int


def quotient_dim(forms: Sequence[Polynomial], t: int) -> int:
    """dim (S / <forms>)_t by degreewise elimination."""
    n = forms[0].nvars - 1
    return dim_graded(n, t) - rank(ideal_matrix(list(forms), t))


def check_basepoint_free(forms: Sequence[Polynomial], t_max: int | None = None) -> BasepointCertificate:
    """Smallest t <= t_max with (S/<forms>)_t = 0; not certified means inconclusive."""
    forms = list(forms)
    if not forms:
        raise ValueError("need at least one form")
    n = forms[0].nvars - 1
    degs = {f.degree for f in forms if f}
    if any(not f.is_homogeneous() for f in forms) or len(degs) > 1:
        raise ValueError("forms must be homogeneous of one degree")
    d = degs.pop() if degs else 1
    if t_max is None:
        t_max = (n + 1) * (d - 1) + d
    for t in range(0, t_max + 1):
        if quotient_dim(forms, t) == 0:
            return BasepointCertificate(True, t, t_max)
    return BasepointCertificate(False, None, t_max)


def validate_subspace(forms: Sequence[Polynomial], n: int, d: int, t_max: int | None = None) -> BasepointCertificate:
    """Raise unless ``forms`` are independent degree-d forms with a basepoint certificate."""
    forms = list(forms)
    if not forms:
        raise SubspaceError("subspace needs at least one form")
    for f in forms:
        if f.nvars != n + 1:
            raise SubspaceError(f"form {f} is not in {n + 1} variables")
        if not f.is_homogeneous(d) or not f:
            raise SubspaceError(f"form {f} is not a nonzero form of degree {d}")
    coords = ExactMatrix.from_columns(forms[0].field, [f.coordinates(monomial_basis(n, d)) for f in forms],
                                      dim_graded(n, d))
    if rank(coords) != len(forms):
        raise SubspaceError("subspace forms are linearly dependent")
    cert = check_basepoint_free(forms, t_max)
    if not cert.certified:
        raise BasepointError(f"no vanishing graded piece of S/<U> up to degree {cert.t_max}; "
                             "basepoint-freeness is inconclusive")
    return cert


def restrict_to_subspace(cfg: TateConfig, forms: Sequence[Polynomial]) -> TateConfig:
    """The configuration of the restricted resolution T_U for U spanned by ``forms``."""
    validate_subspace(forms, cfg.n, cfg.d)
    return TateConfig(cfg.field, cfg.n, cfg.d, cfg.ell, cfg.p_range, tuple(forms))


# ---------------------------------------------------------------------------
# windows


@dataclass
class TateWindow:
    config: TateConfig
    t_range: tuple[int, int]
    summands: dict[int, SummandDescriptor]
    slices: dict[tuple[int, int], ExactMatrix]
    sign_convention: str = "alternating"
    certificate: BasepointCertificate | None = dc_field(default=None, compare=False)

    def dims(self, p: int, t: int) -> tuple[int, int]:
        return slice_dims(self.config, p, t)

    def has(self, p: int, t: int) -> bool:
        return (p, t) in self.slices

    def blocks(self, p: int, t: int) -> tuple[ExactMatrix, ExactMatrix, ExactMatrix]:
        """(alpha, unsigned B, beta) read back from the stored d_p slice."""
        M = self.slices[(p, t)]
        top0, bot0 = self.dims(p, t)
        top1, _ = self.dims(p + 1, t)
        fld = self.config.field
        a = M.data
        alpha = ExactMatrix._wrap(fld, a[:top1, :top0].copy())
        B = ExactMatrix._wrap(fld, a[top1:, :top0].copy())
        beta = ExactMatrix._wrap(fld, a[top1:, top0:].copy())
        s = SIGN_CONVENTIONS[self.sign_convention](p)
        return alpha, (B if s == 1 else -B), beta

    def to_json(self) -> dict:
        cfg = self.config
        return {
            "config": dict(cfg.to_json(), t_range=list(self.t_range), sign_convention=self.sign_convention),
            "descriptors": [self.summands[p].to_json() for p in sorted(self.summands)],
            "slices": [{"p": p, "t": t, "domain": list(self.dims(p, t)),
                        "codomain": list(self.dims(p + 1, t)), "matrix": M.to_json()}
                       for (p, t), M in sorted(self.slices.items())],
        }

    @classmethod
    def from_json(cls, obj: dict) -> TateWindow:
        cfg = TateConfig.from_json(obj["config"])
        t_range = tuple(obj["config"]["t_range"])
        sign = obj["config"].get("sign_convention", "alternating")
        slices = {}
        for s in obj["slices"]:
            p, t = int(s["p"]), int(s["t"])
            M = ExactMatrix.from_json(cfg.field, s["matrix"])
            top0, bot0 = slice_dims(cfg, p, t)
            top1, bot1 = slice_dims(cfg, p + 1, t)
            if M.shape != (top1 + bot1, top0 + bot0):
                raise ValueError(f"slice ({p}, {t}) has shape {M.shape}, "
                                 f"expected {(top1 + bot1, top0 + bot0)}")
            slices[(p, t)] = M
        summands = {p: summand_dims(cfg, p) for p in range(cfg.p_range[0], cfg.p_range[1] + 1)}
        return cls(cfg, t_range, summands, slices, sign)


def default_t_range(cfg: TateConfig) -> tuple[int, int]:
    """Internal degrees where some term with p in the window is nonzero."""
    return cfg.p_range[0] - cfg.n, cfg.p_range[1] + cfg.N


def build_window(cfg: TateConfig, t_range: tuple[int, int] | None = None,
                 sign_convention: str = "alternating") -> TateWindow:
    """All slices d_p in degree t for p in cfg.p_range, t in t_range."""
    cert = None
    if cfg.subspace is not None:
        cert = validate_subspace(cfg.subspace, cfg.n, cfg.d)
    if t_range is None:
        t_range = default_t_range(cfg)
    t_range = (int(t_range[0]), int(t_range[1]))
    if sign_convention not in SIGN_CONVENTIONS:
        raise ValueError(f"unknown sign convention {sign_convention!r}")
    p0, p1 = cfg.p_range
    slices = {}
    for p in range(p0, p1 + 1):
        for t in range(t_range[0], t_range[1] + 1):
            slices[(p, t)] = differential_slice(cfg, p, t, sign_convention)
    summands = {p: summand_dims(cfg, p) for p in range(p0, p1 + 1)}
    return TateWindow(cfg, t_range, summands, slices, sign_convention, cert)


# ---------------------------------------------------------------------------
# verifiers


def verify_complex(w: TateWindow) -> Report:
    """d_{p+1} d_p = 0 for every stored consecutive pair."""
    rep = Report()
    for (p, t) in sorted(w.slices):
        if (p + 1, t) not in w.slices:
            continue
        with rep.timed("d_squared", (p, t)) as box:
            prod = w.slices[(p + 1, t)] @ w.slices[(p, t)]
            bad = prod.first_nonzero()
            if bad is not None:
                box["ok"] = False
                box["detail"] = f"nonzero entry at row {bad[0]}, col {bad[1]}"
    return rep


def _slice_rank(w: TateWindow, p: int, t: int, cache: dict) -> int | None:
    """Rank of d_p in degree t, or None when that map is not known."""
    key = (p, t)
    if key not in cache:
        top0, bot0 = w.dims(p, t)
        top1, bot1 = w.dims(p + 1, t)
        if top0 + bot0 == 0 or top1 + bot1 == 0:
            cache[key] = 0
        elif key in w.slices:
            cache[key] = rank(w.slices[key])
        else:
            cache[key] = None
    return cache[key]


def verify_exactness(w: TateWindow) -> Report:
    """rank d_{p-1} + rank d_p = dim T^p in every degree where both maps are known.

    Positions at the ends of the window whose incoming or outgoing map is
    not stored (and not forced to vanish) are skipped and noted.
    """
    rep = Report()
    ranks: dict = {}
    p0, p1 = w.config.p_range
    for t in range(w.t_range[0], w.t_range[1] + 1):
        for p in range(p0, p1 + 2):
            dim = sum(w.dims(p, t))
            if dim == 0:
                continue
            r_in = _slice_rank(w, p - 1, t, ranks)
            r_out = _slice_rank(w, p, t, ranks)
            if r_in is None or r_out is None:
                rep.add("exactness_boundary_skipped", (p, t), True,
                        "boundary position: adjacent map outside the window")
                continue
            gap = dim - r_in - r_out
            rep.add("exactness", (p, t), gap == 0,
                    "" if gap == 0 else f"dim ker - dim im = {gap} (dim {dim}, ranks {r_in}+{r_out})")
    return rep


def generator_degree_checks(w: TateWindow, p: int) -> Report:
    """Injectivity claims in the degree N-n+p of the minimal generators of the top summand.

    With r = rho - a: for 0 <= r < d the Bezoutian block is injective and
    its image meets Im(beta_p) trivially; for r >= d alpha_p is injective,
    alpha + s(p)B is injective and meets Im(beta_p) trivially.
    """
    cfg = w.config
    rep = Report()
    t = cfg.N - cfg.n + p
    r = cfg.rho - cfg.a(p)
    loc = (p, t)
    if r < 0:
        rep.add("generator_degree", loc, True, "vacuous: top summand is empty")
        return rep
    if (p, t) not in w.slices:
        raise KeyError(f"slice (p={p}, t={t}) is not in the window")
    M = w.slices[(p, t)]
    top0, bot0 = w.dims(p, t)
    top_col = ExactMatrix._wrap(cfg.field, M.data[:, :top0].copy())
    bot_col = ExactMatrix._wrap(cfg.field, M.data[:, top0:].copy())
    rk_top, rk_bot, rk_all = rank(top_col), rank(bot_col), rank(M)
    branch = "bezout" if r < cfg.d else "alpha"
    rep.add(f"{branch}_branch_injective", loc, rk_top == top0,
            f"rank {rk_top} of {top0}")
    rep.add(f"{branch}_branch_trivial_intersection", loc, rk_all == rk_top + rk_bot,
            f"rank {rk_all} vs {rk_top} + {rk_bot}")
    if branch == "alpha":
        alpha, _, _ = w.blocks(p, t)
        rep.add("alpha_injective", loc, rank(alpha) == top0, f"rank {rank(alpha)} of {top0}")
    return rep


def window_generator_checks(w: TateWindow) -> Report:
    rep = Report()
    cfg = w.config
    for p in range(cfg.p_range[0], cfg.p_range[1] + 1):
        t = cfg.N - cfg.n + p
        if cfg.rho - cfg.a(p) >= 0 and (p, t) not in w.slices:
            rep.add("generator_degree_skipped", (p, t), True, "generator degree outside the window")
            continue
        rep.extend(generator_degree_checks(w, p))
    return rep


def _cone_compare(rep: Report, loc, lhs: ExactMatrix, rhs: ExactMatrix):
    with rep.timed("mapping_cone", loc) as box:
        if lhs.shape != rhs.shape:
            box["ok"] = False
            box["detail"] = f"shape mismatch {lhs.shape} vs {rhs.shape}"
            return
        bad = (lhs - rhs).first_nonzero()
        if bad is not None:
            box["ok"] = False
            box["detail"] = f"B_(p+1) alpha_p != beta_(p+1) B_p at row {bad[0]}, col {bad[1]}"
        elif lhs.rows == 0 or lhs.cols == 0:
            box["detail"] = "vacuous: empty spaces"


def mapping_cone_check(cfg: TateConfig, p: int, t: int,
                       bezout: Callable[[TateConfig, int, int], ExactMatrix] = bezout_map_slice) -> Report:
    """B_{p+1} alpha_p = beta_{p+1} B_p in degree t (no signs)."""
    rep = Report()
    lhs = bezout(cfg, p + 1, t) @ alpha_slice(cfg, p, t)
    rhs = beta_slice(cfg, p + 1, t) @ bezout(cfg, p, t)
    _cone_compare(rep, (p, t), lhs, rhs)
    return rep


def window_cone_check(w: TateWindow) -> Report:
    """Mapping-cone commutativity read off the stored slices."""
    rep = Report()
    for (p, t) in sorted(w.slices):
        if (p + 1, t) not in w.slices:
            continue
        alpha0, B0, _ = w.blocks(p, t)
        _, B1, beta1 = w.blocks(p + 1, t)
        _cone_compare(rep, (p, t), B1 @ alpha0, beta1 @ B0)
    return rep


def euler_characteristic(cfg: TateConfig, t: int, p_lo: int, p_hi: int) -> int:
    return sum((-1) ** (p % 2) * sum(slice_dims(cfg, p, t)) for p in range(p_lo, p_hi + 1))


def nonzero_p_range(cfg: TateConfig, t: int) -> tuple[int, int]:
    """p-interval outside which the degree-t terms vanish."""
    return t - cfg.N, t + cfg.n
