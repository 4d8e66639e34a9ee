from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from ffrt.field_poly import Poly, Ring, format_poly, is_local_unit, is_prime, local_inverse, parse_poly

from conftest import polys

R3 = Ring(3, 2, ("x", "y"))
R2 = Ring(2, 2, ("x", "y"))


def P(ring, text):
    return ring.parse(text)


def test_is_prime():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_ring_rejects_composite():
    with pytest.raises(ValueError):
        Ring(4, 1)
    with pytest.raises(ValueError):
        Ring(1, 1)


def test_add_examples():
    assert P(R3, "x + y") + P(R3, "x + 2*y") == P(R3, "2*x")
    f = P(R3, "x^2 + x*y")
    assert f + R3.zero() == f
    assert f + f == P(R3, "2*x^2 + 2*x*y")


def test_mul_examples():
    assert P(R2, "(x+y)*(x+y)") == P(R2, "x^2 + y^2")
    f = P(R3, "x^2 + x*y")
    assert f * R3.one() == f
    assert f**3 == P(R3, "x^6 + x^3*y^3")


def test_pow_examples():
    x = R3.var(0)
    assert x**0 == R3.one()
    assert P(R3, "x*y") ** 2 == P(R3, "x^2*y^2")
    for p in (2, 3, 5, 7):
        R = Ring(p, 1)
        x = R.var(0)
        assert (x + 1) ** p == x**p + 1


def test_pow_rejects_negative():
    with pytest.raises(ValueError):
        R3.var(0) ** -1


def test_ambient_mismatch():
    with pytest.raises(ValueError):
        Ring(3, 1).var(0) + Ring(3, 2).var(0)
    with pytest.raises(ValueError):
        Ring(3, 1).var(0) * Ring(5, 1).var(0)


def test_no_zero_coefficients_stored():
    f = Poly(R3, {(1, 0): 3, (0, 1): 4})
    assert f.terms == {(0, 1): 1}


def test_truncation_drops_high_degree():
    T = R3.with_trunc(3)
    f = Poly(T, {(0, 0): 1, (1, 1): 1, (2, 1): 1})
    assert f.terms == {(0, 0): 1, (1, 1): 1}
    g = T.var(0) * T.var(0) * T.var(1)
    assert g.is_zero()


def test_is_local_unit():
    R = Ring(3, 2)
    assert is_local_unit(parse_poly("1 + x1", R))
    assert not is_local_unit(parse_poly("x1 + x2^2", R))
    assert not is_local_unit(R.zero())


def test_local_inverse_examples():
    R = Ring(3, 1, ("x",))
    assert local_inverse(R.one(), 5) == R.one()
    assert local_inverse(P(R, "1 + x"), 3) == P(R, "1 + 2*x + x^2")
    assert local_inverse(Ring(5, 1).const(2), 4) == Ring(5, 1).const(3)
    with pytest.raises(ValueError):
        local_inverse(P(R, "x"), 3)


def test_parser():
    R = Ring(5, 3)
    assert parse_poly("x^2 - 3*y + 7", R) == parse_poly("x1**2 + 2*x2 + 2", R)
    assert parse_poly(" ( x + z ) ^ 2 ", R) == parse_poly("x1^2 + 2*x1*x3 + x3^2", R)
    assert parse_poly("-x", R) == parse_poly("4*x1", R)
    for bad in ("", "x +", "w", "x4", "x^y", "x/2", "2.5*x", "f(x)"):
        with pytest.raises(ValueError):
            parse_poly(bad, R)


def test_letter_aliases_only_for_small_rings():
    R = Ring(3, 4)
    with pytest.raises(ValueError):
        parse_poly("y", R)
    assert parse_poly("x2", R) == R.var(1)


def test_canonical_string():
    R = Ring(3, 2, ("x", "y"))
    assert format_poly(P(R, "1 + y + x + 2*x*y + x^2")) == "x^2 + 2*x*y + x + y + 1"
    assert format_poly(R.zero()) == "0"
    assert str(P(R, "-x")) == "2*x"


def test_extend_makes_names_unique():
    R = Ring(3, 2, ("x", "y"))
    E = R.extend("y", "u")
    assert E.names == ("x", "y", "y1", "u")


def test_embed_offsets():
    R = Ring(3, 1, ("x",))
    big = Ring(3, 3)
    assert P(R, "x^2").embed(big, 1) == big.monomial((0, 2, 0))


# properties

R_small = Ring(3, 2)
triples = st.tuples(polys(R_small), polys(R_small), polys(R_small))


@settings(max_examples=1000)
@given(triples)
def test_ring_laws(abc):
    a, b, c = abc
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a - a == R_small.zero()


@pytest.mark.parametrize("p", [2, 3, 5])
@settings(max_examples=100)
@given(data=st.data())
def test_frobenius_additive(p, data):
    R = Ring(p, 2)
    a, b = data.draw(polys(R)), data.draw(polys(R))
    assert (a + b) ** p == a**p + b**p


@settings(max_examples=200)
@given(data=st.data(), N=st.integers(1, 8))
def test_local_inverse_property(data, N):
    R = Ring(5, 2)
    base = data.draw(polys(R))
    a = Poly(R, {**base.terms, (0, 0): data.draw(st.integers(1, 4))})
    b = local_inverse(a, N)
    T = R.with_trunc(N)
    assert a.truncate(N) * b == T.one()


@settings(max_examples=200)
@given(data=st.data(), N=st.integers(1, 10))
def test_truncation_coherence(data, N):
    R = Ring(3, 2)
    a, b, c = (data.draw(polys(R)) for _ in range(3))
    exact = (a * b * c).truncate(N)
    T = a.truncate(N) * b.truncate(N) * c.truncate(N)
    assert exact == T
