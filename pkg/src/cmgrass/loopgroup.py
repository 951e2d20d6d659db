"""Loop-group elements as 1-jets along the spectrum of Y, and their action.

The action on canonical coordinates only consumes the value and first
derivative of the loop at each eigenvalue lambda_i, so a group element is
stored as that finite jet data.  Composition follows the product rule, which
makes the jets a genuine group acting on the right.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .cmspace import CMPoint, Quadruple, gauge_fix
from .errors import (SingularJet, SingularMatrix, SingularValueAtSpectrum,
                     SpectrumMismatch, YNotScalar)
from .poly import Poly, RatFun
from .scalar import Scalar, ZERO, ONE, sc


@dataclass(frozen=True)
class GammaJet:
    """Per-site 1-jets (lambda_i, g(lambda_i), g'(lambda_i)) of a loop."""

    r: int
    lams: tuple
    values: tuple
    derivs: tuple

    def __post_init__(self):
        object.__setattr__(self, "lams", tuple(sc(x) for x in self.lams))
        object.__setattr__(
            self, "values",
            tuple(tuple(tuple(sc(e) for e in row) for row in m)
                  for m in self.values))
        object.__setattr__(
            self, "derivs",
            tuple(tuple(tuple(sc(e) for e in row) for row in m)
                  for m in self.derivs))
        if not (len(self.lams) == len(self.values) == len(self.derivs)):
            raise ValueError("jet site-count mismatch")
        for m in self.values + self.derivs:
            if len(m) != self.r or any(len(row) != self.r for row in m):
                raise ValueError(f"jet matrices must be {self.r}x{self.r}")
        for i, m in enumerate(self.values):
            if linalg.det(linalg.mat(m)).is_zero():
                raise SingularValueAtSpectrum(
                    f"loop value at lambda_{i} is singular")

    @property
    def n(self) -> int:
        return len(self.lams)


def jet_identity(lams, r: int) -> GammaJet:
    ident = linalg.identity(r)
    zero = linalg.zeros(r, r)
    return GammaJet(r=r, lams=tuple(lams),
                    values=tuple(ident for _ in lams),
                    derivs=tuple(zero for _ in lams))


def jet_of_polymat(gamma, lams) -> GammaJet:
    """Exact 1-jets of a polynomial matrix loop at the given points."""
    g = [[p if isinstance(p, Poly) else Poly.const(sc(p)) for p in row]
         for row in gamma]
    r = len(g)
    gp = [[p.derivative() for p in row] for row in g]
    values = []
    derivs = []
    for lam in lams:
        lam = sc(lam)
        values.append([[p.eval(lam) for p in row] for row in g])
        derivs.append([[p.eval(lam) for p in row] for row in gp])
    return GammaJet(r=r, lams=tuple(lams), values=tuple(values),
                    derivs=tuple(derivs))


def _same_lams(a: GammaJet, b: GammaJet):
    if a.r != b.r or a.n != b.n or any(x != y for x, y in zip(a.lams, b.lams)):
        raise SpectrumMismatch("jets live over different spectra")


def jet_mul(a: GammaJet, b: GammaJet) -> GammaJet:
    """Jet of the pointwise product: values a_i b_i, derivatives by Leibniz."""
    _same_lams(a, b)
    values = []
    derivs = []
    for i in range(a.n):
        av, ad = linalg.mat(a.values[i]), linalg.mat(a.derivs[i])
        bv, bd = linalg.mat(b.values[i]), linalg.mat(b.derivs[i])
        values.append(linalg.mmul(av, bv))
        derivs.append(linalg.madd(linalg.mmul(ad, bv), linalg.mmul(av, bd)))
    return GammaJet(r=a.r, lams=a.lams, values=tuple(values),
                    derivs=tuple(derivs))


def jet_inverse(a: GammaJet) -> GammaJet:
    """Jet of the pointwise inverse: (g^-1, -g^-1 g' g^-1)."""
    values = []
    derivs = []
    for i in range(a.n):
        gv = linalg.inverse(linalg.mat(a.values[i]))
        values.append(gv)
        derivs.append(linalg.mneg(
            linalg.mmul(gv, linalg.mmul(linalg.mat(a.derivs[i]), gv))))
    return GammaJet(r=a.r, lams=a.lams, values=tuple(values),
                    derivs=tuple(derivs))


def act(p: CMPoint, j: GammaJet) -> CMPoint:
    """Right action on canonical coordinates.

    v_i -> v_i g_i, w_i -> g_i^{-1} w_i and the X-diagonal picks up
    v_i g'_i g_i^{-1} w_i (with the incoming v, w); lambda is untouched and the
    result is re-gauge-fixed.
    """
    if j.r != p.r or j.n != p.n or any(x != y for x, y in zip(j.lams, p.lam)):
        raise SpectrumMismatch("jet spectrum does not match the point")
    alpha_new = []
    vrow_new = []
    wcol_new = []
    for i in range(p.n):
        g = linalg.mat(j.values[i])
        gp = linalg.mat(j.derivs[i])
        ginv = linalg.inverse(g)
        vi = [list(p.vrow[i])]
        wi = [[x] for x in p.wcol[i]]
        shift = linalg.mmul(vi, linalg.mmul(gp, linalg.mmul(ginv, wi)))[0][0]
        alpha_new.append(p.alpha[i] + shift)
        vrow_new.append(linalg.mmul(vi, g)[0])
        wcol_new.append([row[0] for row in linalg.mmul(ginv, wi)])
    return gauge_fix(p.n, p.r, list(p.lam), alpha_new, vrow_new, wcol_new)


def act_scalar_Y(q: Quadruple, g, gp) -> Quadruple:
    """Action on a quadruple whose Y is scalar: only one jet is needed.

    Returns (X + v g' g^{-1} w, Y; v g, g^{-1} w).
    """
    if q.n:
        lam = q.Y[0][0]
        for i in range(q.n):
            for jj in range(q.n):
                want = lam if i == jj else ZERO
                if not q.Y[i][jj] == want:
                    raise YNotScalar("Y is not a scalar matrix")
    g = [[sc(e) for e in row] for row in g]
    gp = [[sc(e) for e in row] for row in gp]
    try:
        ginv = linalg.inverse(g)
    except SingularMatrix:
        raise SingularJet("loop value is singular")
    v = linalg.mat(q.v)
    w = linalg.mat(q.w)
    X_new = linalg.madd(linalg.mat(q.X),
                        linalg.mmul(v, linalg.mmul(gp, linalg.mmul(ginv, w))))
    return Quadruple(n=q.n, r=q.r, X=X_new, Y=q.Y,
                     v=linalg.mmul(v, g), w=linalg.mmul(ginv, w))


def is_gamma_alg(p, m) -> bool:
    """Membership in the algebraic loop group, given in factored form.

    ``p`` describes the scalar exponent (a polynomial, or None for no scalar
    factor); ``m`` is the matrix part with polynomial entries.  The element
    belongs iff the exponent is polynomial and det m is a nonzero constant.
    """
    if p is not None and not isinstance(p, Poly):
        if isinstance(p, RatFun):
            if not p.is_poly():
                return False
        else:
            try:
                Poly.const(sc(p))
            except TypeError:
                return False
    mm = [[e if isinstance(e, Poly) else Poly.const(sc(e)) for e in row]
          for row in m]
    d = linalg.det(mm)
    return d.degree() == 0
