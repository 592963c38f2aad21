"""Exterior-power bases and shuffle signs.

A basis element of the i-th exterior power of an N-dimensional space with
ordered basis w_0..w_{N-1} is a strictly increasing index tuple.  The sign
of a shuffle (left | right) is (-1)^(number of pairs a in left, b in right
with a > b), i.e. the sign with which w_left ^ w_right equals the sorted
wedge.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import NamedTuple

WedgeIndex = tuple  # strictly increasing tuple of ints


class SignedPair(NamedTuple):
    left: WedgeIndex
    right: WedgeIndex
    sign: int


@lru_cache(maxsize=None)
def wedge_basis(N: int, i: int) -> tuple[WedgeIndex, ...]:
    """All C(N, i) increasing i-tuples from range(N), lexicographically."""
    if i < 0 or i > N:
        return ()
    return tuple(combinations(range(N), i))


@lru_cache(maxsize=None)
def wedge_position(N: int, i: int) -> dict[WedgeIndex, int]:
    return {w: k for k, w in enumerate(wedge_basis(N, i))}


def shuffle_sign(left, right) -> int:
    inv = sum(1 for a in left for b in right if a > b)
    return -1 if inv % 2 else 1


@lru_cache(maxsize=None)
def split(omega: WedgeIndex, j: int) -> tuple[SignedPair, ...]:
    """All ways to write omega = sign * (left ^ right) with |left| = j."""
    if not 0 <= j <= len(omega):
        raise ValueError(f"cannot split a {len(omega)}-wedge with j={j}")
    out = []
    for pos in combinations(range(len(omega)), j):
        chosen = set(pos)
        left = tuple(omega[k] for k in pos)
        right = tuple(omega[k] for k in range(len(omega)) if k not in chosen)
        out.append(SignedPair(left, right, shuffle_sign(left, right)))
    return tuple(out)


def normalize_wedge(indices) -> tuple[WedgeIndex, int] | None:
    """Sort a wedge of basis vectors; ``None`` when an index repeats."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return None
    inv = sum(1 for a in range(len(idx)) for b in range(a + 1, len(idx)) if idx[a] > idx[b])
    return tuple(sorted(idx)), (-1 if inv % 2 else 1)


def contractions(omega: WedgeIndex):
    """Yield (position-sign, removed index, remaining wedge) for omega.

    This is the left contraction pattern: removing the r-th factor
    (0-based) carries the sign (-1)^r.
    """
    for r, k in enumerate(omega):
        yield (-1 if r % 2 else 1), k, omega[:r] + omega[r + 1:]
