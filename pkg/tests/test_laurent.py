"""Sparse Laurent polynomials and canonical rational functions."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from quadwalks.errors import DivisionByZero, ParseError, PoleAtPoint
from quadwalks.field import Rad
from quadwalks.laurent import LaurentPoly, RatFunc

XY = ("x", "y")


def P(entries):
    return LaurentPoly(XY, {tuple(e): Fraction(c) for e, c in entries.items()})


def polys():
    term = st.tuples(
        st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
        st.fractions(min_value=-8, max_value=8, max_denominator=6),
    )
    return st.lists(term, max_size=5).map(
        lambda ts: LaurentPoly(XY, {e: c for e, c in ts})
    )


class TestLaurentPoly:
    def test_no_zero_terms_stored(self):
        p = P({(1, 0): 1}) - P({(1, 0): 1})
        assert not p.terms and not p

    def test_product_difference_of_squares(self):
        x_plus = P({(1, 0): 1, (0, 1): 1})
        x_minus = P({(1, 0): 1, (0, 1): -1})
        assert x_plus * x_minus == P({(2, 0): 1, (0, 2): -1})

    def test_laurent_product(self):
        f = P({(1, 0): 1, (-1, 0): 1})
        g = P({(1, 0): 1, (-1, 0): -1})
        assert f * g == P({(2, 0): 1, (-2, 0): -1})

    def test_additive_identity(self):
        f = P({(2, -1): 3, (0, 0): -2})
        assert f + LaurentPoly.zero(XY) == f

    @given(polys(), polys(), polys())
    @settings(max_examples=60, deadline=None)
    def test_ring_axioms(self, f, g, h):
        assert (f + g) * h == f * h + g * h
        assert f * (g * h) == (f * g) * h
        assert f * g == g * f

    def test_eval_exact(self):
        gb = P({(-1, 1): 1, (1, -1): 1, (-1, 0): 1, (1, 0): 1})
        assert gb.eval([Fraction(1), Fraction(1)]) == 4
        assert gb.eval([Fraction(-1), Fraction(1)]) == -4
        r3 = Rad.root(3, 2)
        appa = P({(1, 0): 1, (-1, 0): 1, (0, -1): 1, (-2, 1): 1})
        assert appa.eval([r3, r3]) == 2 * r3

    def test_eval_pole(self):
        f = P({(-1, 0): 1})
        with pytest.raises(PoleAtPoint):
            f.eval([Fraction(0), Fraction(1)])

    def test_derivative(self):
        f = P({(2, 1): 3, (-1, 0): 1})
        assert f.derivative("x") == P({(1, 1): 6, (-2, 0): -1})

    def test_try_divide(self):
        f = P({(1, 0): 1, (0, 1): 1})
        g = P({(1, 0): 1, (0, 1): -1})
        prod = f * g
        assert prod.try_divide(f) == g
        assert prod.try_divide(P({(1, 1): 1, (0, 0): 1})) is None

    def test_serialization_roundtrip(self):
        f = P({(2, -1): Fraction(3, 4), (0, 0): -2, (-1, 3): 5})
        assert LaurentPoly.parse(f.serialize(), XY) == f

    def test_serialization_deterministic_order(self):
        f = P({(0, 2): 1, (1, 0): 2, (0, 0): 3})
        lines = f.serialize().splitlines()
        assert lines == ["3 0 0", "2 1 0", "1 0 2"]

    def test_parse_errors(self):
        with pytest.raises(ParseError):
            LaurentPoly.parse("1 2", XY)  # wrong arity
        with pytest.raises(ParseError):
            LaurentPoly.parse("1 0 0\n2 0 0", XY)  # duplicate exponent


class TestRatFunc:
    def test_monomial_content_removed(self):
        r = RatFunc(P({(3, 2): 1, (2, 2): 1}), P({(2, 1): 5}))
        assert r.den.min_exponents() == (0, 0)
        lead = r.den.leading_term()
        assert lead[1] == 1

    def test_cross_multiplication_equality(self):
        a = RatFunc(P({(1, 0): 1}), P({(0, 1): 1}))
        b = RatFunc(P({(2, 0): 2}), P({(1, 1): 2}))
        assert a == b

    def test_polynomial_factor_cancelled(self):
        f = P({(1, 0): 1, (0, 1): 1})
        num = f * P({(1, 0): 1})
        den = f * P({(0, 1): 1})
        r = RatFunc(num, den)
        assert r.is_laurent_polynomial()
        assert r == RatFunc(P({(1, 0): 1}), P({(0, 1): 1}))

    def test_compose_identity(self):
        f = RatFunc(P({(1, 1): 1, (0, 0): 1}), P({(1, 0): 1}))
        images = [RatFunc.variable(XY, "x"), RatFunc.variable(XY, "y")]
        assert f.compose(images) == f

    def test_compose_involution(self):
        # (x, y) -> (x, x^2/y) applied twice is the identity
        x = RatFunc.variable(XY, "x")
        phi_y = RatFunc(P({(2, 0): 1}), P({(0, 1): 1}))
        once = [x, phi_y]
        twice = [im.compose(once) for im in once]
        assert twice[0] == x and twice[1] == RatFunc.variable(XY, "y")

    def test_zero_denominator_rejected(self):
        with pytest.raises(DivisionByZero):
            RatFunc(P({(0, 0): 1}), LaurentPoly.zero(XY))

    @given(polys(), polys())
    @settings(max_examples=40, deadline=None)
    def test_field_axioms(self, f, g):
        if not f or not g:
            return
        a = RatFunc(f, g)
        b = RatFunc(g, f)
        assert a * b == RatFunc.from_poly(LaurentPoly.constant(XY, 1))
        assert (a + b) - b == a

    def test_laurent_expansion_geometric(self):
        # 1/(1 - x) around 0
        r = RatFunc(P({(0, 0): 1}), P({(0, 0): 1, (1, 0): -1}))
        exp = r.laurent_expansion((0, 0), (5, 0))
        assert exp == P({(i, 0): 1 for i in range(6)})

    def test_laurent_expansion_with_monomial_shift(self):
        # (1 - x^2)/(y (1 + x^2)) = y^{-1} (1 - 2x^2 + 2x^4 - ...)
        r = RatFunc(P({(0, 0): 1, (2, 0): -1}), P({(0, 1): 1, (2, 1): 1}))
        exp = r.laurent_expansion((0, -1), (5, 0))
        assert exp == P({(0, -1): 1, (2, -1): -2, (4, -1): 2})

    def test_numerator_file_roundtrip(self):
        r = RatFunc(P({(2, 0): 1, (0, 0): -1}), P({(1, 1): 1, (0, 0): 2}))
        assert RatFunc.parse(r.serialize(), XY) == r
