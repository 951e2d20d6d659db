"""Seeded random generators for test data.

Everything is driven by a ``random.Random`` instance so that failures
reproduce from a seed.  Exact values are small Gaussian rationals; numeric
generators reuse the exact ones and coerce.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import linalg
from .cmspace import CMPoint, Quadruple, from_cd_coords, gauge_fix
from .loopgroup import GammaJet, jet_of_polymat
from .poly import Poly
from .scalar import Scalar, ZERO, ONE, sc

__all__ = ["rand_scalar", "rand_cmpoint", "rand_quadruple", "rand_alpha",
           "rand_nilpotent", "rand_invertible", "rand_poly",
           "rand_unimodular_polymat", "rand_jet"]


def rand_scalar(rng: random.Random, span: int = 4, den: int = 3,
                gauss: bool = True) -> Scalar:
    re = Fraction(rng.randint(-span, span), rng.randint(1, den))
    im = Fraction(rng.randint(-span, span), rng.randint(1, den)) if gauss \
        else Fraction(0)
    return Scalar.exact(re, im)


def _distinct_lams(rng: random.Random, n: int):
    seen = set()
    lams = []
    while len(lams) < n:
        x = Scalar.exact(Fraction(rng.randint(-6, 6), rng.randint(1, 3)),
                         Fraction(rng.randint(-2, 2), 1))
        key = (x.re, x.im)
        if key not in seen:
            seen.add(key)
            lams.append(x)
    return lams


def rand_cmpoint(rng: random.Random, n: int, r: int) -> CMPoint:
    """Gauge-fixed exact point: distinct lambdas and v_i . w_i = -1."""
    lams = _distinct_lams(rng, n)
    alpha = [rand_scalar(rng) for _ in range(n)]
    vrow = []
    wcol = []
    for _ in range(n):
        while True:
            v = [rand_scalar(rng, span=3) for _ in range(r)]
            if any(not x.is_zero() for x in v):
                break
        piv = next(a for a in range(r) if not v[a].is_zero())
        # solve v . w = -1 exactly by adjusting the pivot slot of w
        w = [rand_scalar(rng, span=3) for _ in range(r)]
        dot = sum((v[a] * w[a] for a in range(r)), ZERO)
        w[piv] = w[piv] + (sc(-1) - dot) / v[piv]
        vrow.append(v)
        wcol.append(w)
    return gauge_fix(n, r, lams, alpha, vrow, wcol)


def rand_quadruple(rng: random.Random, n: int, r: int) -> Quadruple:
    """A random point of the moment fiber (diagonal-Y chart)."""
    return from_cd_coords(rand_cmpoint(rng, n, r))


def rand_alpha(rng: random.Random, r: int):
    """Dense r x r coefficient matrix for a Hamiltonian."""
    return [[rand_scalar(rng, span=3) for _ in range(r)] for _ in range(r)]


def rand_nilpotent(rng: random.Random, r: int):
    """Rank-one a = u b with b u = 0, so a^2 = 0 (needs r >= 2)."""
    if r < 2:
        raise ValueError("no nonzero nilpotents in one dimension")
    while True:
        u = [rand_scalar(rng, span=3) for _ in range(r)]
        if any(not x.is_zero() for x in u):
            break
    piv = next(a for a in range(r) if not u[a].is_zero())
    b = [rand_scalar(rng, span=3) for _ in range(r)]
    dot = sum((b[a] * u[a] for a in range(r)), ZERO)
    b[piv] = b[piv] - dot / u[piv]
    a = [[u[i] * b[j] for j in range(r)] for i in range(r)]
    if linalg.mat_is_zero(a):
        return rand_nilpotent(rng, r)
    return a


def rand_invertible(rng: random.Random, r: int):
    while True:
        m = [[rand_scalar(rng, span=3) for _ in range(r)] for _ in range(r)]
        if not linalg.det(m).is_zero():
            return m


def rand_poly(rng: random.Random, deg: int, gauss: bool = True) -> Poly:
    return Poly([rand_scalar(rng, span=3, gauss=gauss)
                 for _ in range(deg + 1)])


def rand_unimodular_polymat(rng: random.Random, r: int, factors: int = 3):
    """Product of elementary matrices I + p(z) E_ij (i != j): constant unit det."""
    out = linalg.identity(r, one=Poly([1]), zero=Poly())
    if r == 1:
        c = rand_scalar(rng)
        while c.is_zero():
            c = rand_scalar(rng)
        return [[Poly([c])]]
    for _ in range(factors):
        i = rng.randrange(r)
        j = rng.randrange(r)
        while j == i:
            j = rng.randrange(r)
        e = linalg.identity(r, one=Poly([1]), zero=Poly())
        e[i][j] = rand_poly(rng, rng.randint(0, 2))
        out = linalg.mmul(out, e)
    return out


def rand_jet(rng: random.Random, lams, r: int) -> GammaJet:
    """Jet of a random unimodular polynomial loop at the given sites."""
    return jet_of_polymat(rand_unimodular_polymat(rng, r), lams)
