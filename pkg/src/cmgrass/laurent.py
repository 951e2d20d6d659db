"""Windowed Laurent data of rational row vectors at a point."""

from __future__ import annotations

from dataclasses import dataclass, field

from .poly import RatFun
from .scalar import Scalar, sc


@dataclass(frozen=True)
class LaurentJet:
    """Laurent coefficients of a width-r row over the window [k_min, k_max].

    ``coeffs[k - k_min]`` is the width-r row of coefficients of (z - base)^k.
    ``pole_exceeded`` flags an entry whose pole at ``base`` is deeper than the
    window reaches; the windowed coefficients are still exact.
    """

    base: Scalar
    k_min: int
    k_max: int
    coeffs: tuple = field(default=())
    pole_exceeded: bool = False

    @property
    def width(self) -> int:
        return len(self.coeffs[0]) if self.coeffs else 0

    def coeff(self, k: int):
        if not self.k_min <= k <= self.k_max:
            raise IndexError(f"order {k} outside window [{self.k_min}, {self.k_max}]")
        return self.coeffs[k - self.k_min]


def laurent_expand(f, lam, k_min: int, k_max: int) -> LaurentJet:
    """Expand a row vector of rational functions near ``lam``.

    ``f`` is a sequence of RatFun (or coercibles); the window must satisfy
    k_min <= k_max.  Exact for exact inputs.
    """
    if k_min > k_max:
        raise ValueError("empty Laurent window")
    lam = sc(lam)
    fs = [RatFun.of(x) for x in f]
    cols = [g.laurent_at(lam, k_min, k_max) for g in fs]
    exceeded = any(g.pole_order_at(lam) > -k_min for g in fs if not g.is_zero())
    coeffs = tuple(tuple(col[i] for col in cols) for i in range(k_max - k_min + 1))
    return LaurentJet(base=lam, k_min=k_min, k_max=k_max,
                      coeffs=coeffs, pole_exceeded=exceeded)
