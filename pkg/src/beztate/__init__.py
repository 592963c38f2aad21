"""Bezoutians, explicit Tate resolution slices of Veronese push-forwards, and syzygy dualities."""

from .bezoutian import BezoutData, bezout_slice, bezoutian, divided_difference
from .exact_linalg import DEFAULT_FIELD, QQ, ExactMatrix, FieldSpec, kernel_basis, rank, rref
from .koszul import KoszulSetup, apolarity_matrix, bezout_syzygy, homology_dim, koszul_setup, koszul_slice
from .poly import BiPolynomial, Polynomial, monomial_basis
from .tate import TateConfig, TateWindow, build_window, differential_slice

__version__ = "0.1.0"
