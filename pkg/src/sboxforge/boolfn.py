"""Boolean function representations and affinity analysis.

A scalar function f: F_2^n -> F_2 is a :class:`TruthTable` of 2^n bits; a
vectorial function F: F_2^n -> F_2^m is a :class:`VectorialFunction` lookup
table of 2^n integers below 2^m.  Input vectors (x_1, ..., x_n) map to the
table index with x_1 as the most significant bit; every metric in this
package is invariant under that choice, but file I/O is not, so the
convention is fixed here.

Also provides the exact counting formulas for the sizes of the function
classes BF / BT / BP and the lower/upper bounds on the number of non-affine
Boolean permutations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class TruthTable:
    """Scalar Boolean function as a bit sequence indexed by input vector."""

    n: int
    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.bits) != 1 << self.n:
            raise ValueError(f"expected {1 << self.n} bits, got {len(self.bits)}")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("truth table entries must be 0 or 1")


@dataclass(frozen=True)
class AnfForm:
    """Algebraic normal form: coefficient c(mask) of the monomial with
    variable set given by the bits of mask."""

    n: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != 1 << self.n:
            raise ValueError(f"expected {1 << self.n} coefficients, got {len(self.coeffs)}")


@dataclass(frozen=True)
class VectorialFunction:
    """Lookup table for F: F_2^n -> F_2^m, the universal S-box representation."""

    n: int
    m: int
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.table) != 1 << self.n:
            raise ValueError(f"expected {1 << self.n} entries, got {len(self.table)}")
        top = 1 << self.m
        for i, v in enumerate(self.table):
            if not 0 <= v < top:
                raise ValueError(f"entry {i} = {v} out of range [0, {top})")

    def __call__(self, x: int) -> int:
        return self.table[x]


def weight(f: TruthTable) -> int:
    """Hamming weight: the size of the support of f."""
    return sum(f.bits)


def is_balanced(f: TruthTable) -> bool:
    return weight(f) == 1 << (f.n - 1)


def _mobius(values: list[int]) -> list[int]:
    # Binary Mobius transform (XOR over subsets); self-inverse.
    out = list(values)
    size = len(out)
    h = 1
    while h < size:
        for i in range(0, size, h * 2):
            for j in range(i, i + h):
                out[j + h] ^= out[j]
        h *= 2
    return out


def anf(f: TruthTable) -> AnfForm:
    """Algebraic normal form via the binary Mobius transform."""
    return AnfForm(f.n, tuple(_mobius(list(f.bits))))


def truth_table(a: AnfForm) -> TruthTable:
    """Inverse of :func:`anf` (the Mobius transform is an involution)."""
    return TruthTable(a.n, tuple(_mobius(list(a.coeffs))))


def algebraic_degree(f: TruthTable) -> int:
    """Max Hamming weight of a monomial mask with nonzero ANF coefficient.

    The zero function has degree 0 by convention.
    """
    coeffs = _mobius(list(f.bits))
    deg = 0
    for mask, c in enumerate(coeffs):
        if c:
            w = mask.bit_count()
            if w > deg:
                deg = w
    return deg


def component(F: VectorialFunction, b: int) -> TruthTable:
    """Component function x -> parity(b & F(x)) for a nonzero output mask b."""
    if not 0 < b < 1 << F.m:
        raise ValueError(f"output mask must be in (0, {1 << F.m}), got {b}")
    return TruthTable(F.n, tuple((b & v).bit_count() & 1 for v in F.table))


def is_affine(F: VectorialFunction) -> bool:
    """True iff every component of F has algebraic degree <= 1.

    Checking the m coordinate projections suffices: any XOR combination of
    functions of degree <= 1 again has degree <= 1.
    """
    for j in range(F.m):
        bits = tuple(v >> j & 1 for v in F.table)
        if algebraic_degree(TruthTable(F.n, bits)) > 1:
            return False
    return True


def identity_function(n: int) -> VectorialFunction:
    return VectorialFunction(n, n, tuple(range(1 << n)))


def nonaffine_permutation_bounds(n: int) -> tuple[int, int]:
    """Exact lower and upper bounds on the number of non-affine Boolean
    permutations of F_2^n.

    Returns (mu, n * mu) with mu = (2^n)! - ((2^(n-1))!)^2 * (2^(n+1) - 2),
    computed with arbitrary-precision integers.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    mu = math.factorial(1 << n) - math.factorial(1 << (n - 1)) ** 2 * ((1 << (n + 1)) - 2)
    return mu, n * mu


def class_sizes(n: int, m: int) -> tuple[int, int, int]:
    """Exact sizes (|BF(n, m)|, |BT(n)|, |BP(n)|) of the classes of
    (n, m) vectorial functions, n-variable transformations, and
    n-variable permutations."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    bf = 1 << (m << n)
    bt = 1 << (n << n)
    bp = math.factorial(1 << n)
    return bf, bt, bp
