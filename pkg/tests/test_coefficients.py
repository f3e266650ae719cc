from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from vertex_orbifold.coefficients import (
    K,
    ONE,
    ZERO,
    Scalar,
    ScalarError,
    render_scalar,
    scalar_arith,
    scalar_eval,
    scalar_poles,
)

k = sympy.Symbol("k")

small_poly = st.lists(st.integers(-6, 6), min_size=1, max_size=3)


@st.composite
def scalars(draw):
    num = draw(small_poly)
    den = draw(small_poly.filter(lambda p: any(p)))
    return Scalar.from_polys(num, den)


def to_sympy(s):
    n = sum(c * k**e for e, c in enumerate(s.num))
    d = sum(c * k**e for e, c in enumerate(s.den))
    return n / d


def test_add_like_denominators():
    assert scalar_arith("add", 1 / K, 1 / K) == 2 / K
    assert render_scalar(2 / K) == "2/k"


def test_mul_inverse():
    assert scalar_arith("mul", K, 1 / K) == ONE


def test_div_is_already_reduced():
    q = scalar_arith("div", K, 3 * K + 32)
    assert q.num == (0, 1) and q.den == (32, 3)
    assert render_scalar(q) == "k/(32 + 3*k)"


def test_division_by_zero():
    with pytest.raises(ScalarError):
        scalar_arith("div", K, ZERO)


def test_eval_examples():
    assert scalar_eval(1 / (K + 2), 0) == Fraction(1, 2)
    assert scalar_eval(K**2, -1) == 1
    with pytest.raises(ScalarError):
        scalar_eval(1 / K, 0)


def test_poles_examples():
    assert scalar_poles(1 / (K * (3 * K + 32))) == ([Fraction(-32, 3), Fraction(0)], [])
    assert scalar_poles(K + 1) == ([], [])
    roots, residual = scalar_poles(1 / (K**2 + 1))
    assert roots == [] and residual == [K**2 + 1]


def test_poles_mixed_residual():
    roots, residual = scalar_poles(1 / ((K - 2) ** 2 * (K**2 - 3)))
    assert roots == [Fraction(2)]
    assert residual == [K**2 - 3]


def test_canonical_sign_and_content():
    a = Scalar.from_polys([2, 4], [-6])
    assert a.den == (3,) and a.num == (-1, -2)
    assert Scalar.from_polys([0, 2], [0, 4]) == Scalar(Fraction(1, 2))
    assert hash(Scalar.from_polys([1, 1], [2, 2])) == hash(Scalar(Fraction(1, 2)))


def test_render_examples():
    assert render_scalar((16 - 51 * K) / (9 * K)) == "(16 - 51*k)/(9*k)"
    assert render_scalar(Scalar(Fraction(-5, 4))) == "-5/4"


@settings(max_examples=150, deadline=None)
@given(scalars(), scalars(), scalars())
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == ZERO
    if a:
        assert a * a.inverse() == ONE


@settings(max_examples=150, deadline=None)
@given(scalars(), scalars())
def test_arithmetic_matches_sympy(a, b):
    assert sympy.cancel(to_sympy(a + b) - to_sympy(a) - to_sympy(b)) == 0
    assert sympy.cancel(to_sympy(a * b) - to_sympy(a) * to_sympy(b)) == 0


@settings(max_examples=100, deadline=None)
@given(scalars(), st.integers(-20, 20))
def test_eval_is_a_homomorphism(a, k0):
    b = a * a + 3
    try:
        va = scalar_eval(a, k0)
    except ScalarError:
        return
    assert scalar_eval(b, k0) == va * va + 3


@settings(max_examples=100, deadline=None)
@given(scalars(), scalars())
def test_poles_of_product_are_contained(a, b):
    pa, _ = scalar_poles(a)
    pb, _ = scalar_poles(b)
    pab, _ = scalar_poles(a * b)
    assert set(pab) <= set(pa) | set(pb)


@settings(max_examples=100, deadline=None)
@given(scalars())
def test_poles_are_the_rational_zeros_of_the_denominator(a):
    roots, residual = scalar_poles(a)
    den = sympy.Poly(list(reversed(a.den)), k)
    expected = sorted(r for r in sympy.roots(den, filter="Q"))
    assert [sympy.Rational(r.numerator, r.denominator) for r in roots] == expected
    for f in residual:
        assert len(f.num) >= 3
