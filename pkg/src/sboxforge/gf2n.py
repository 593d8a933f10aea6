"""Arithmetic in GF(2^n) for 2 <= n <= 16.

Field elements are plain Python integers in [0, 2^n): the binary digits of
the integer are the coefficients of a polynomial residue over F_2.  A field
is described by a :class:`FieldSpec`, which fixes the dimension ``n`` and the
irreducible reduction polynomial (as a bitmask with bit ``i`` holding the
coefficient of ``x^i``).  Construction precomputes discrete log / antilog
tables from the smallest primitive element, so multiplication and
exponentiation are O(1) lookups.

The default 8-bit polynomial is 0x11B (x^8 + x^4 + x^3 + x + 1), the one used
by Rijndael.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

MIN_N = 2
MAX_N = 16

#: Rijndael's reduction polynomial, the package-wide default for n = 8.
AES_POLY = 0x11B


def _clmul_reduce(a: int, b: int, poly: int, n: int) -> int:
    """Schoolbook carry-less multiply of a and b, reduced mod poly."""
    p = 0
    while b:
        if b & 1:
            p ^= a
        b >>= 1
        a <<= 1
        if a >> n & 1:
            a ^= poly
    return p


def poly_degree(poly: int) -> int:
    """Degree of a polynomial bitmask (-1 for the zero polynomial)."""
    return poly.bit_length() - 1


def is_irreducible(poly: int) -> bool:
    """Irreducibility test over F_2 by trial division.

    Divides by every polynomial of degree 1 .. deg(poly)//2; a degree-d
    reducible polynomial always has a factor of degree at most d//2.
    """
    d = poly_degree(poly)
    if d < 1:
        return False
    if d == 1:
        return True
    for q in range(2, 1 << (d // 2 + 1)):
        r = poly
        qd = poly_degree(q)
        while poly_degree(r) >= qd:
            r ^= q << (poly_degree(r) - qd)
        if r == 0:
            return False
    return True


def _prime_factors(m: int) -> list[int]:
    out = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out


@dataclass(frozen=True)
class FieldSpec:
    """GF(2^n) under a fixed irreducible polynomial.

    Immutable after construction; the log/antilog tables are derived state
    and excluded from equality.  All operations on a FieldSpec are pure, so
    instances are safe to share across threads and processes.
    """

    n: int
    poly: int
    generator: int = field(init=False, compare=False, repr=False)
    log: np.ndarray = field(init=False, compare=False, repr=False)
    alog: np.ndarray = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not MIN_N <= self.n <= MAX_N:
            raise ValueError(f"field dimension n={self.n} outside [{MIN_N}, {MAX_N}]")
        if poly_degree(self.poly) != self.n:
            raise ValueError(
                f"polynomial 0x{self.poly:X} has degree {poly_degree(self.poly)}, expected {self.n}"
            )
        if not is_irreducible(self.poly):
            raise ValueError(f"polynomial 0x{self.poly:X} is reducible over F_2")
        g = self._find_generator()
        log, alog = self._build_tables(g)
        object.__setattr__(self, "generator", g)
        object.__setattr__(self, "log", log)
        object.__setattr__(self, "alog", alog)

    @property
    def order(self) -> int:
        return 1 << self.n

    def _find_generator(self) -> int:
        # Smallest g >= 2 with multiplicative order 2^n - 1.  g generates
        # iff g^((2^n-1)/p) != 1 for every prime p dividing 2^n - 1.
        m = self.order - 1
        primes = _prime_factors(m)
        for g in range(2, self.order):
            if all(self._pow_raw(g, m // p) != 1 for p in primes):
                return g
        raise AssertionError("no generator found; field construction is broken")

    def _pow_raw(self, x: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = _clmul_reduce(r, x, self.poly, self.n)
            x = _clmul_reduce(x, x, self.poly, self.n)
            e >>= 1
        return r

    def _build_tables(self, g: int) -> tuple[np.ndarray, np.ndarray]:
        m = self.order - 1
        log = np.zeros(self.order, dtype=np.int64)
        alog = np.zeros(m, dtype=np.int64)
        v = 1
        for k in range(m):
            alog[k] = v
            log[v] = k
            v = _clmul_reduce(v, g, self.poly, self.n)
        return log, alog

    def validate_element(self, x: int) -> None:
        if not 0 <= x < self.order:
            raise ValueError(f"element {x} outside [0, {self.order}) for n={self.n}")


def make_field(n: int, poly: int) -> FieldSpec:
    """Validate (n, poly) and build the field with its log/antilog tables."""
    return FieldSpec(n, poly)


@lru_cache(maxsize=None)
def default_poly(n: int) -> int:
    """Default irreducible polynomial of degree n.

    n = 8 uses the Rijndael polynomial 0x11B; every other degree uses the
    numerically smallest irreducible bitmask, a deterministic and
    representation-independent rule.
    """
    if n == 8:
        return AES_POLY
    if not MIN_N <= n <= MAX_N:
        raise ValueError(f"n={n} outside [{MIN_N}, {MAX_N}]")
    for poly in range((1 << n) | 1, 1 << (n + 1), 2):
        if is_irreducible(poly):
            return poly
    raise AssertionError(f"no irreducible polynomial of degree {n}")


def gf_mul(a: int, b: int, spec: FieldSpec) -> int:
    """Product in GF(2^n) via log/antilog lookup."""
    spec.validate_element(a)
    spec.validate_element(b)
    if a == 0 or b == 0:
        return 0
    m = spec.order - 1
    return int(spec.alog[(int(spec.log[a]) + int(spec.log[b])) % m])


def gf_pow(x: int, d: int, spec: FieldSpec) -> int:
    """x^d in GF(2^n), with 0^0 = 1 and 0^d = 0 for d > 0."""
    spec.validate_element(x)
    if d < 0:
        raise ValueError("exponent must be non-negative")
    if x == 0:
        return 1 if d == 0 else 0
    m = spec.order - 1
    return int(spec.alog[(int(spec.log[x]) * d) % m])


def gf_inv(x: int, spec: FieldSpec) -> int:
    """Multiplicative inverse; raises for 0."""
    if x == 0:
        raise ZeroDivisionError("0 has no inverse in GF(2^n)")
    return gf_pow(x, spec.order - 2, spec)
