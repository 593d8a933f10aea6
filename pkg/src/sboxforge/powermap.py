"""Power functions x -> x^d over GF(2^n): cosets, families, survey.

Exponents d and d*2 mod (2^n - 1) give linearly equivalent power maps
(squaring is linear), so exponents are grouped into cyclotomic cosets and
metrics are computed once per coset representative.  x^d is bijective iff
gcd(2^n - 1, d) = 1, and restricted to the nonzero elements it is a
q-to-one map with q = gcd(2^n - 1, d).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import metrics
from .boolfn import VectorialFunction
from .gf2n import FieldSpec


@dataclass(frozen=True)
class ExponentClass:
    """A cyclotomic coset of exponents with its shared metric profile."""

    representative: int
    members: frozenset[int]
    q: int
    du: int
    nl: int
    bijective: bool


def cyclotomic_coset(d: int, n: int) -> set[int]:
    """Orbit of d under doubling mod 2^n - 1."""
    m = (1 << n) - 1
    if not 1 <= d <= m - 1:
        raise ValueError(f"exponent must be in [1, {m - 1}], got {d}")
    out = set()
    v = d
    while v not in out:
        out.add(v)
        v = (v * 2) % m
    return out


def all_cosets(n: int) -> list[set[int]]:
    """Partition of {1, ..., 2^n - 2} into cyclotomic cosets, ordered by
    smallest member."""
    m = (1 << n) - 1
    seen: set[int] = set()
    out = []
    for d in range(1, m):
        if d in seen:
            continue
        coset = cyclotomic_coset(d, n)
        seen |= coset
        out.append(coset)
    return out


def gold_exponents(n: int) -> list[int]:
    """Exponents 2^i + 1 with gcd(i, n) = 1, 1 <= i < n."""
    if n < 3:
        raise ValueError("n must be >= 3")
    return sorted({(1 << i) + 1 for i in range(1, n) if math.gcd(i, n) == 1})


def kasami_exponents(n: int) -> list[int]:
    """Exponents 2^(2i) - 2^i + 1 with gcd(i, n) = 1, reduced mod 2^n - 1."""
    if n < 3:
        raise ValueError("n must be >= 3")
    m = (1 << n) - 1
    out = set()
    for i in range(1, n):
        if math.gcd(i, n) != 1:
            continue
        d = ((1 << (2 * i)) - (1 << i) + 1) % m
        if d != 0:
            out.add(d)
    return sorted(out)


def power_table(d: int, spec: FieldSpec) -> VectorialFunction:
    """Lookup table of x -> x^d (0 -> 0 for d >= 1)."""
    if d < 1:
        raise ValueError("exponent must be >= 1")
    order = spec.order
    xs = np.arange(1, order)
    table = np.zeros(order, dtype=np.int64)
    table[1:] = spec.alog[(spec.log[xs] * d) % (order - 1)]
    return VectorialFunction(spec.n, spec.n, tuple(int(v) for v in table))


def survey(
    n: int,
    spec: FieldSpec,
    du_max: int,
    nl_min: int,
    bijective: bool | None = None,
) -> list[ExponentClass]:
    """Classify every power map x^d, d in 1 .. 2^n - 2, by cyclotomic coset.

    Metrics are computed once per coset representative (members are
    equivalent maps); the result is filtered to du <= du_max, nl >= nl_min,
    and optionally by bijectivity, then sorted by (du, -nl, representative).
    """
    if spec.n != n:
        raise ValueError(f"field has n={spec.n}, survey asked for n={n}")
    if du_max < 2:
        raise ValueError("du_max must be >= 2")
    if nl_min < 0:
        raise ValueError("nl_min must be >= 0")
    m = (1 << n) - 1
    out = []
    for coset in all_cosets(n):
        rep = min(coset)
        q = math.gcd(m, rep)
        F = power_table(rep, spec)
        du = metrics.differential_uniformity(F)
        nl = metrics.nonlinearity(F)
        cls = ExponentClass(
            representative=rep,
            members=frozenset(coset),
            q=q,
            du=du,
            nl=nl,
            bijective=q == 1,
        )
        if cls.du > du_max or cls.nl < nl_min:
            continue
        if bijective is not None and cls.bijective != bijective:
            continue
        out.append(cls)
    out.sort(key=lambda c: (c.du, -c.nl, c.representative))
    return out
