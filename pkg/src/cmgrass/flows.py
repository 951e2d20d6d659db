"""Gibbons-Hermsen Hamiltonians tr(Y^k v a w) and their flows.

Closed-form trajectories exist whenever the needed matrix exponential is
elementary: scalar a (a gauge flow shifting the diagonal of X), nilpotent a of
index 2 (polynomial exponential, exact), and the general numeric case.  An RK4
integrator of the equations of motion serves as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from . import linalg
from .cmspace import CMPoint, Quadruple, gauge_fix
from .errors import NotNilpotent, UnsupportedExactExponential
from .poly import Poly
from .scalar import Scalar, ZERO, ONE, sc


@dataclass(frozen=True)
class FlowSpec:
    k: int
    alpha: tuple
    t: Scalar

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("flow index k must be >= 0")


def hamiltonian(q: Quadruple, k: int, alpha) -> Scalar:
    """J_{k, a} = tr(Y^k v a w)."""
    m = linalg.mmul(linalg.mpow(linalg.mat(q.Y), k),
                    linalg.mmul(linalg.mat(q.v),
                                linalg.mmul(linalg.mat(alpha), linalg.mat(q.w))))
    return linalg.trace(m) if q.n else ZERO


def vector_field(q: Quadruple, k: int, alpha):
    """Right-hand side (dX, dY, dv, dw) of the equations of motion.

    dX is the symmetrized sum  Y^{k-1-j} (v a w) Y^j  (zero for k = 0, v a w
    for k = 1), dY = 0, dv = Y^k v a, dw = -a w Y^k.
    """
    Y = linalg.mat(q.Y)
    a = linalg.mat(alpha)
    vaw = linalg.mmul(linalg.mat(q.v), linalg.mmul(a, linalg.mat(q.w)))
    dX = linalg.zeros(q.n, q.n)
    for j in range(k):
        dX = linalg.madd(dX, linalg.mmul(linalg.mpow(Y, k - 1 - j),
                                         linalg.mmul(vaw, linalg.mpow(Y, j))))
    dY = linalg.zeros(q.n, q.n)
    dv = linalg.mmul(linalg.mpow(Y, k), linalg.mmul(linalg.mat(q.v), a))
    dw = linalg.mneg(linalg.mmul(a, linalg.mmul(linalg.mat(q.w),
                                                linalg.mpow(Y, k))))
    return dX, dY, dv, dw


# ---------------------------------------------------------------------------
# closed-form flows


def _is_scalar_matrix(a):
    r = len(a)
    c = a[0][0]
    for i in range(r):
        for j in range(r):
            want = c if i == j else ZERO
            if not a[i][j] == want:
                return None
    return c


def _is_nilpotent2(a) -> bool:
    return linalg.mat_is_zero(linalg.mmul(a, a))


def flow_closed(p: CMPoint, k: int, alpha, t) -> CMPoint:
    """Exact trajectory on the chart where Y = diag(lambda).

    v_i(t) = v_i exp(lambda_i^k a t), w_i(t) = exp(-lambda_i^k a t) w_i and the
    diagonal of X moves linearly; Y is fixed.  Exact mode handles scalar a
    (pure gauge, only alpha_i moves) and nilpotent a of index 2; anything else
    needs numeric mode.
    """
    a = [[sc(e) for e in row] for row in alpha]
    t = sc(t)
    exact = (p.is_exact and t.is_exact
             and all(e.is_exact for row in a for e in row))
    lam = list(p.lam)
    csc = _is_scalar_matrix(a)
    if csc is not None and csc.is_exact and exact:
        # exp(lambda^k c t) is a torus gauge factor: only the X-diagonal moves
        alpha_new = [p.alpha[i] - csc * sc(k) * lam[i] ** max(k - 1, 0) * t
                     if k >= 1 else p.alpha[i] for i in range(p.n)]
        return gauge_fix(p.n, p.r, lam, alpha_new, [list(v) for v in p.vrow],
                         [list(w) for w in p.wcol])
    if exact and _is_nilpotent2(a):
        exps = []
        for i in range(p.n):
            s = lam[i] ** k * t
            e = [[(ONE if x == y else ZERO) + a[x][y] * s
                  for y in range(p.r)] for x in range(p.r)]
            einv = [[(ONE if x == y else ZERO) - a[x][y] * s
                     for y in range(p.r)] for x in range(p.r)]
            exps.append((e, einv))
    elif not exact:
        exps = []
        anp = linalg.to_numpy(a)
        for i in range(p.n):
            s = (lam[i] ** k * t).to_complex()
            exps.append((linalg.from_numpy(expm(s * anp)),
                         linalg.from_numpy(expm(-s * anp))))
    else:
        raise UnsupportedExactExponential(
            "exact closed-form flow needs scalar or index-2 nilpotent alpha")
    alpha_new = []
    vrow_new = []
    wcol_new = []
    for i in range(p.n):
        e, einv = exps[i]
        vi = [list(p.vrow[i])]
        wi = [[x] for x in p.wcol[i]]
        viawi = linalg.mmul(vi, linalg.mmul(a, wi))[0][0]
        rate = sc(k) * lam[i] ** max(k - 1, 0) * viawi if k >= 1 else ZERO
        alpha_new.append(p.alpha[i] + rate * t)
        vrow_new.append(linalg.mmul(vi, e)[0])
        wcol_new.append([row[0] for row in linalg.mmul(einv, wi)])
    return gauge_fix(p.n, p.r, lam, alpha_new, vrow_new, wcol_new)


def flow_scalar(q: Quadruple, p: Poly) -> Quadruple:
    """Action of the scalar loop exp(p(z)) : X -> X - p'(Y), rest fixed."""
    dp = p.derivative()
    Y = linalg.mat(q.Y)
    # p'(Y) by Horner
    acc = linalg.zeros(q.n, q.n)
    for c in reversed(dp.coeffs):
        acc = linalg.mmul(acc, Y)
        for i in range(q.n):
            acc[i][i] = acc[i][i] + c
    return Quadruple(n=q.n, r=q.r, X=linalg.msub(linalg.mat(q.X), acc),
                     Y=q.Y, v=q.v, w=q.w)


def flow_nilpotent(q: Quadruple, k: int, alpha, t) -> Quadruple:
    """Flow for alpha^2 = 0 on arbitrary Y: v a w is a constant of motion."""
    a = [[sc(e) for e in row] for row in alpha]
    if not _is_nilpotent2(a):
        raise NotNilpotent("alpha^2 != 0")
    t = sc(t)
    Y = linalg.mat(q.Y)
    v = linalg.mat(q.v)
    w = linalg.mat(q.w)
    vaw = linalg.mmul(v, linalg.mmul(a, w))
    dX = linalg.zeros(q.n, q.n)
    for j in range(k):
        dX = linalg.madd(dX, linalg.mmul(linalg.mpow(Y, k - 1 - j),
                                         linalg.mmul(vaw, linalg.mpow(Y, j))))
    yk = linalg.mpow(Y, k)
    v_new = linalg.madd(v, linalg.mscale(linalg.mmul(yk, linalg.mmul(v, a)), t))
    w_new = linalg.msub(w, linalg.mscale(linalg.mmul(a, linalg.mmul(w, yk)), t))
    X_new = linalg.madd(linalg.mat(q.X), linalg.mscale(dX, t))
    return Quadruple(n=q.n, r=q.r, X=X_new, Y=q.Y, v=v_new, w=w_new)


# ---------------------------------------------------------------------------
# numeric oracle


def flow_numeric(q: Quadruple, k: int, alpha, t, steps: int = 10000) -> Quadruple:
    """Classical RK4 integration of the equations of motion (oracle only)."""
    a = linalg.to_numpy([[sc(e) for e in row] for row in alpha])
    Y = linalg.to_numpy(q.Y)
    yk = np.linalg.matrix_power(Y, k)
    X = linalg.to_numpy(q.X)
    v = linalg.to_numpy(q.v)
    w = linalg.to_numpy(q.w)
    ypows = [np.linalg.matrix_power(Y, j) for j in range(max(k, 1))]

    def rhs(state):
        X_, v_, w_ = state
        vaw = v_ @ a @ w_
        dX = np.zeros_like(X_)
        for j in range(k):
            dX += ypows[k - 1 - j] @ vaw @ ypows[j]
        return (dX, yk @ v_ @ a, -(a @ w_ @ yk))

    dt = sc(t).to_complex() / steps
    state = (X, v, w)
    for _ in range(steps):
        k1 = rhs(state)
        k2 = rhs(tuple(s + 0.5 * dt * d for s, d in zip(state, k1)))
        k3 = rhs(tuple(s + 0.5 * dt * d for s, d in zip(state, k2)))
        k4 = rhs(tuple(s + dt * d for s, d in zip(state, k3)))
        state = tuple(s + dt / 6.0 * (d1 + 2 * d2 + 2 * d3 + d4)
                      for s, d1, d2, d3, d4 in zip(state, k1, k2, k3, k4))
    X, v, w = state
    return Quadruple(n=q.n, r=q.r, X=linalg.from_numpy(X),
                     Y=linalg.from_numpy(Y), v=linalg.from_numpy(v),
                     w=linalg.from_numpy(w))


# ---------------------------------------------------------------------------
# Poisson bracket oracle


def poisson_bracket(q: Quadruple, spec1, spec2, h: float = 1e-4) -> Scalar:
    """Finite-difference Poisson bracket of two Hamiltonians at q.

    The pairing tr(dY ^ dX + dw ^ dv) makes (X_ij, Y_ji) and (v_ia, w_ai)
    canonically conjugate; the bracket is assembled from central differences
    with step h.
    """
    k1, a1 = spec1
    k2, a2 = spec2
    a1 = linalg.to_numpy([[sc(e) for e in row] for row in a1])
    a2 = linalg.to_numpy([[sc(e) for e in row] for row in a2])
    X = linalg.to_numpy(q.X)
    Y = linalg.to_numpy(q.Y)
    v = linalg.to_numpy(q.v)
    w = linalg.to_numpy(q.w)

    def ham(X_, Y_, v_, w_, k, a):
        return np.trace(np.linalg.matrix_power(Y_, k) @ v_ @ a @ w_)

    def grads(k, a):
        dX = np.zeros_like(X)
        dY = np.zeros_like(Y)
        dv = np.zeros_like(v)
        dw = np.zeros_like(w)
        for i in range(q.n):
            for j in range(q.n):
                for (arr, out) in ((X, dX), (Y, dY)):
                    old = arr[i, j]
                    arr[i, j] = old + h
                    fp = ham(X, Y, v, w, k, a)
                    arr[i, j] = old - h
                    fm = ham(X, Y, v, w, k, a)
                    arr[i, j] = old
                    out[i, j] = (fp - fm) / (2 * h)
        for i in range(q.n):
            for aa in range(q.r):
                for (arr, out, idx) in ((v, dv, (i, aa)), (w, dw, (aa, i))):
                    old = arr[idx]
                    arr[idx] = old + h
                    fp = ham(X, Y, v, w, k, a)
                    arr[idx] = old - h
                    fm = ham(X, Y, v, w, k, a)
                    arr[idx] = old
                    out[idx] = (fp - fm) / (2 * h)
        return dX, dY, dv, dw

    dX1, dY1, dv1, dw1 = grads(k1, a1)
    dX2, dY2, dv2, dw2 = grads(k2, a2)
    # {F, G} = sum dF/dY_ji dG/dX_ij - dF/dX_ij dG/dY_ji + (w, v analogue);
    # with this orientation {J_{k,a}, J_{l,b}} = J_{k+l,[a,b]}
    val = 0j
    for i in range(q.n):
        for j in range(q.n):
            val += dY1[j, i] * dX2[i, j] - dX1[i, j] * dY2[j, i]
    for i in range(q.n):
        for aa in range(q.r):
            val += dw1[aa, i] * dv2[i, aa] - dv1[i, aa] * dw2[aa, i]
    return Scalar.numeric(val)
