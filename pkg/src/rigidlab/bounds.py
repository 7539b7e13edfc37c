"""Embedding-count upper bounds via exact big-integer arithmetic.

The central quantity is the degree of the rank-constrained squared-distance
variety, computed from its product formula; the embedding bound is twice
that.  Closed binomial forms for dimensions 2 and 3 are cross-checks, never
the source of truth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


def cm_degree(d: int, n: int) -> int:
    """Cayley-Menger degree D(d,n) = prod_k C(n-1+k, n-d-1-k) / C(2k+1, k)."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if n < d + 1:
        raise ValueError(f"need n >= d+1, got n={n}, d={d}")
    value = Fraction(1)
    for k in range(0, n - d - 1):
        value *= Fraction(math.comb(n - 1 + k, n - d - 1 - k), math.comb(2 * k + 1, k))
    if value.denominator != 1:
        raise ArithmeticError(f"degree product is not integral for d={d}, n={n}")
    return value.numerator


def planar_bound(n: int) -> int:
    """Upper bound C(2n-4, n-2) on pinned planar embeddings of a Laman graph."""
    if n < 3:
        raise ValueError("need n >= 3")
    value = math.comb(2 * n - 4, n - 2)
    if value != 2 * cm_degree(2, n):
        raise ArithmeticError(f"binomial form disagrees with degree product at n={n}")
    return value


def spatial_bound(n: int) -> int:
    """Upper bound 2*D(3,n) on spatial embeddings of a 3-isostatic graph.

    Cross-checked against the closed form 2^(n-3)/(n-2) * C(2n-6, n-3),
    which the product formula confirms for all n tested.
    """
    if n < 4:
        raise ValueError("need n >= 4")
    value = 2 * cm_degree(3, n)
    numer = (1 << (n - 3)) * math.comb(2 * n - 6, n - 3)
    closed, rem = divmod(numer, n - 2)
    if rem != 0 or closed != value:
        raise ArithmeticError(f"closed form disagrees with degree product at n={n}")
    return value


def opmt_bound(d: int, n: int) -> int:
    """Betti-number bound 2 * 3^(dn-1) for the quadratic edge-length system."""
    if d < 1 or n < 1:
        raise ValueError("need d >= 1 and n >= 1")
    return 2 * 3 ** (d * n - 1)


@dataclass(frozen=True)
class BoundReport:
    d: int
    n: int
    cm_degree: int
    embedding_bound: int
    opmt: int

    def __post_init__(self) -> None:
        if self.embedding_bound != 2 * self.cm_degree:
            raise ValueError("embedding bound must be twice the variety degree")


def bound_report(d: int, n: int) -> BoundReport:
    deg = cm_degree(d, n)
    return BoundReport(d=d, n=n, cm_degree=deg, embedding_bound=2 * deg, opmt=opmt_bound(d, n))
