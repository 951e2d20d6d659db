import random
from fractions import Fraction

import pytest

from cmgrass.poly import Poly, RatFun, series_div, P_ONE
from cmgrass.scalar import Scalar, sc, ONE


def test_poly_ring_axioms_random():
    rng = random.Random(11)

    def rpoly():
        return Poly([Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                     for _ in range(rng.randint(0, 5))])

    for _ in range(20):
        a, b, c = rpoly(), rpoly(), rpoly()
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)
        assert a + b == b + a


def test_divmod_and_gcd():
    a = Poly([1, 0, 1]) * Poly([2, 1])     # (z^2+1)(z+2)
    b = Poly([1, 0, 1]) * Poly([-1, 1])    # (z^2+1)(z-1)
    q, r = a.divmod(b)
    assert q * b + r == a
    g = a.gcd(b)
    assert g.monic() == Poly([1, 0, 1])


def test_derivative_leibniz():
    a = Poly([1, 2, 3])
    b = Poly([0, 1, 0, 4])
    assert (a * b).derivative() == a.derivative() * b + a * b.derivative()


def test_eval_and_from_roots():
    p = Poly.from_roots([sc(1), sc(2), sc(-3)])
    assert p.eval(sc(1)).is_zero()
    assert p.eval(sc(2)).is_zero()
    assert not p.eval(sc(0)).is_zero()
    assert p.degree() == 3
    assert p.leading() == ONE


def test_ratfun_field_and_cancellation():
    f = RatFun(Poly([0, 1]), Poly([1, 1]))      # z/(1+z)
    g = RatFun(Poly([1]), Poly([0, 1]))         # 1/z
    assert (f * g) / g == f
    assert f - f == RatFun.of(0)
    h = RatFun(Poly([0, 0, 1]), Poly([0, 1]))   # z^2/z = z
    assert h.is_poly()
    assert h.as_poly() == Poly([0, 1])


def test_ratfun_derivative_quotient_rule():
    f = RatFun(Poly([1, 1]), Poly([0, 0, 1]))   # (1+z)/z^2
    g = RatFun(Poly([2, 0, 1]), Poly([1, 1]))
    assert (f * g).derivative() == f.derivative() * g + f * g.derivative()


def test_pole_order_and_laurent_window():
    f = RatFun(Poly([1]), Poly([0, 0, 1]))      # 1/z^2
    assert f.pole_order_at(sc(0)) == 2
    assert f.pole_order_at(sc(1)) == 0
    lau = f.laurent_at(sc(0), -2, 1)
    assert lau[0] == ONE and lau[1].is_zero()
    # shifted point: 1/(z-1) + 3
    g = RatFun(Poly([1]), Poly([-1, 1])) + RatFun.of(3)
    lau = g.laurent_at(sc(1), -1, 0)
    assert lau[0] == ONE and lau[1] == sc(3)


def test_series_div_matches_geometric():
    # 1/(1-z) = 1 + z + z^2 + ...
    cs = series_div([ONE], [ONE, sc(-1)], 5)
    assert all(c == ONE for c in cs)


def test_expand_at_infinity():
    # z/(z-1) = 1 + 1/z + 1/z^2 + ...
    f = RatFun(Poly([0, 1]), Poly([-1, 1]))
    cs = f.expand_at_infinity(3)
    assert cs[0] == ONE and cs[-1] == ONE and cs[-2] == ONE


def test_even_decimate_and_subs_square():
    p = Poly([1, 2, 3, 4])
    e, o = p.even_decimate()
    assert e == Poly([1, 3]) and o == Poly([2, 4])
    f = RatFun(Poly([1, 1]), Poly([0, 1]))
    h = f.subs_square()
    # f(u^2) evaluated at u=2 equals f(4)
    assert h.eval(sc(2)) == f.eval(sc(4))


def test_poly_shift():
    p = Poly([1, 1])  # 1 + z
    q = p.shift(sc(2))
    assert q.eval(sc(0)) == p.eval(sc(2))
