"""Differential and linear profiles of vectorial Boolean functions.

The two central tables:

* DDT: ``counts[a][b] = |{x : F(x + a) + F(x) = b}|`` — the differential
  distribution table; its maximum over a != 0 is the differential
  uniformity (DU).
* Walsh spectrum: ``values[b][a] = sum_x (-1)^(b.F(x) + a.x)`` — the
  nonlinearity (NL) is ``2^(n-1) - max|values[b != 0][a]| / 2``.

NL is computed through the fast Walsh-Hadamard transform rather than the
distance-to-affine definition (O(2^m * n * 2^n) instead of
O(2^m * 2^(n+1) * 2^n)); the equivalence of the two routes is covered by the
test suite at small n.  Full DDT/Walsh matrices are only materialized while
2^n x 2^m stays at or below 2^24 cells; DU and NL themselves stream row by
row and work for any supported n.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .boolfn import VectorialFunction

_MAX_TABLE_CELLS_LOG2 = 24


def _parity_table() -> np.ndarray:
    p = np.arange(1 << 16, dtype=np.uint32)
    p ^= p >> 8
    p ^= p >> 4
    p ^= p >> 2
    p ^= p >> 1
    return (p & 1).astype(np.uint8)


_PARITY = _parity_table()
_SIGN = (1 - 2 * _PARITY.astype(np.int32))


def fwht_rows_inplace(mat: np.ndarray) -> np.ndarray:
    """Fast Walsh-Hadamard transform along the last axis, in place."""
    size = mat.shape[-1]
    h = 1
    while h < size:
        m = mat.reshape(-1, size // (2 * h), 2, h)
        a = m[:, :, 0, :]
        b = m[:, :, 1, :]
        t = a - b
        a += b
        b[...] = t
        h *= 2
    return mat


@dataclass(eq=False)
class DDTable:
    """Dense differential distribution table, counts[a][b]."""

    n: int
    m: int
    counts: np.ndarray

    def max_nontrivial(self) -> int:
        return int(self.counts[1:].max())


@dataclass(eq=False)
class WalshTable:
    """Walsh spectrum, values[b][a]; row b = 0 is present but carries no
    nonlinearity information."""

    n: int
    m: int
    values: np.ndarray

    def max_abs_nontrivial(self) -> int:
        return int(np.abs(self.values[1:]).max())


@dataclass(frozen=True)
class FibreProfile:
    """Image structure of a lookup table.

    ``multiplicity_histogram`` maps fibre size k to the number of image
    points with exactly k preimages.  ``excess`` lists, in ascending input
    order, every non-canonical preimage together with the output value it
    duplicates; the canonical preimage of an image point is its numerically
    smallest input.
    """

    image_size: int
    multiplicity_histogram: dict[int, int]
    excess: tuple[tuple[int, int], ...]


def _check_table_size(n: int, m: int, what: str) -> None:
    if n + m > _MAX_TABLE_CELLS_LOG2:
        raise ValueError(
            f"{what} materialization needs 2^{n + m} cells; "
            f"limit is 2^{_MAX_TABLE_CELLS_LOG2} (use the streaming metric instead)"
        )


def ddt(F: VectorialFunction) -> DDTable:
    """Exact differential distribution table of F."""
    _check_table_size(F.n, F.m, "DDT")
    tbl = np.asarray(F.table, dtype=np.int64)
    size = 1 << F.n
    width = 1 << F.m
    x = np.arange(size)
    counts = np.empty((size, width), dtype=np.int32)
    for a in range(size):
        diffs = tbl ^ tbl[x ^ a]
        counts[a] = np.bincount(diffs, minlength=width)
    return DDTable(F.n, F.m, counts)


def differential_uniformity(F: VectorialFunction) -> int:
    """Max DDT entry over nonzero input differences, without materializing
    the full table."""
    tbl = np.asarray(F.table, dtype=np.int64)
    size = 1 << F.n
    width = 1 << F.m
    x = np.arange(size)
    du = 0
    for a in range(1, size):
        diffs = tbl ^ tbl[x ^ a]
        row_max = int(np.bincount(diffs, minlength=width).max())
        if row_max > du:
            du = row_max
    return du


def _sign_rows(tbl: np.ndarray, bs: np.ndarray) -> np.ndarray:
    masks = np.bitwise_and.outer(bs.astype(np.uint32), tbl.astype(np.uint32))
    return _SIGN[masks]


def walsh(F: VectorialFunction) -> WalshTable:
    """Full Walsh spectrum via the fast transform, one row per output mask."""
    _check_table_size(F.n, F.m, "Walsh table")
    tbl = np.asarray(F.table)
    bs = np.arange(1 << F.m)
    values = _sign_rows(tbl, bs)
    fwht_rows_inplace(values)
    return WalshTable(F.n, F.m, values)


def nonlinearity(F: VectorialFunction) -> int:
    """NL of F: 2^(n-1) minus half the max absolute Walsh value over b != 0."""
    tbl = np.asarray(F.table)
    if F.n + F.m <= _MAX_TABLE_CELLS_LOG2:
        w = _sign_rows(tbl, np.arange(1 << F.m))
        fwht_rows_inplace(w)
        max_abs = int(np.abs(w[1:]).max())
    else:
        max_abs = 0
        chunk = max(1, (1 << _MAX_TABLE_CELLS_LOG2) >> F.n)
        for start in range(1, 1 << F.m, chunk):
            bs = np.arange(start, min(start + chunk, 1 << F.m))
            w = _sign_rows(tbl, bs)
            fwht_rows_inplace(w)
            max_abs = max(max_abs, int(np.abs(w).max()))
    return (1 << (F.n - 1)) - max_abs // 2


def nl_upper_bounds(n: int, balanced: bool) -> int:
    """Upper bound on achievable NL of a scalar function on n variables.

    Without the balance constraint this is the bent bound
    2^(n-1) - 2^(floor(n/2) - 1).  Balanced functions (n >= 3) lose 2 more
    when n is even; for odd n the bound is the largest even integer at or
    below the bent bound.
    """
    if balanced and n < 3:
        raise ValueError("balanced bound requires n >= 3")
    if n < 2:
        raise ValueError("bound requires n >= 2")
    bent = (1 << (n - 1)) - (1 << (n // 2 - 1))
    if not balanced:
        return bent
    if n % 2 == 0:
        return bent - 2
    return bent - (bent % 2)


def is_bijective(F: VectorialFunction) -> bool:
    """True iff F is a permutation; only defined for n = m."""
    if F.n != F.m:
        raise ValueError(f"bijectivity requires n = m, got n={F.n}, m={F.m}")
    return len(set(F.table)) == 1 << F.n


def fibre_profile(F: VectorialFunction) -> FibreProfile:
    """Image size, fibre-size histogram, and surplus preimages of F."""
    first_seen: dict[int, int] = {}
    excess: list[tuple[int, int]] = []
    counts: Counter[int] = Counter()
    for x, v in enumerate(F.table):
        counts[v] += 1
        if v in first_seen:
            excess.append((x, v))
        else:
            first_seen[v] = x
    hist = Counter(counts.values())
    return FibreProfile(
        image_size=len(first_seen),
        multiplicity_histogram=dict(sorted(hist.items())),
        excess=tuple(excess),
    )


def fixed_points(F: VectorialFunction) -> int:
    """Number of inputs with F(x) = x."""
    return sum(1 for x, v in enumerate(F.table) if x == v)


def max_component_degree(F: VectorialFunction) -> int:
    """Algebraic degree of F: max degree over its coordinate components."""
    from .boolfn import TruthTable, algebraic_degree

    deg = 0
    for j in range(F.m):
        bits = tuple(v >> j & 1 for v in F.table)
        d = algebraic_degree(TruthTable(F.n, bits))
        if d > deg:
            deg = d
    return deg
