"""Graded series arithmetic: truncation, log/exp, the n-regrade."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from quadwalks.errors import NonUnitConstantTerm
from quadwalks.field import scalar_inv
from quadwalks.laurent import LaurentPoly
from quadwalks.series import GradedSeries
from quadwalks.expansion import rho_series
from quadwalks.model import step_polynomial
from quadwalks import corpus

ST = ("s", "t")


def P(entries):
    return LaurentPoly(ST, {tuple(e): Fraction(c) for e, c in entries.items()})


def unit_series():
    coeff = st.fractions(min_value=-4, max_value=4, max_denominator=5)

    def build(cs):
        comps = {}
        for g, c in enumerate(cs, start=1):
            if c:
                comps[g] = P({(g, 0): c, (0, g): -c})
        return GradedSeries(ST, 6, comps)

    return st.lists(coeff, min_size=1, max_size=5).map(build)


class TestSeriesOps:
    @given(unit_series())
    @settings(max_examples=40, deadline=None)
    def test_exp_log_roundtrip(self, u):
        assert u.log1p().exp() == GradedSeries.one(ST, 6) + u
        assert (u.exp() - GradedSeries.one(ST, 6)).log1p() == u

    @given(unit_series())
    @settings(max_examples=30, deadline=None)
    def test_inverse(self, u):
        f = GradedSeries.one(ST, 6) + u
        assert f * f.inverse() == GradedSeries.one(ST, 6)

    def test_truncation_respected(self):
        u = GradedSeries(ST, 3, {1: P({(1, 0): 1})})
        sq = u * u
        assert sq.grades() == [2]
        cube = sq * u
        assert cube.grades() == [3]
        assert (cube * u).grades() == []  # grade 4 beyond truncation

    def test_exp_requires_zero_constant(self):
        f = GradedSeries.one(ST, 4)
        with pytest.raises(NonUnitConstantTerm):
            f.exp()

    def test_log_requires_unit(self):
        z = GradedSeries(ST, 4, {1: P({(1, 0): 1})})
        with pytest.raises(NonUnitConstantTerm):
            z.log()

    def test_times_n_negates(self):
        u = GradedSeries(ST, 6, {3: P({(3, 0): 1})})
        assert u.times_n() == GradedSeries(ST, 6, {1: P({(3, 0): -1})})


class TestModelSeries:
    def test_simple_walk_gaussian_grade(self, simple):
        # log of the scaled step-polynomial series: grade 2 is the form
        # (s^2 + t^2)/4 in the i^g component convention
        S = step_polynomial(simple)
        ser = rho_series(S, (Fraction(1), Fraction(1)), ST, 4)
        logt = (ser * scalar_inv(Fraction(4))).log()
        assert logt.component(2) == P({(2, 0): Fraction(1, 4), (0, 2): Fraction(1, 4)})

    def test_gb_gaussian_grade(self, gb):
        # (s^2 + (s - t)^2)/4 = s^2/2 - st/2 + t^2/4
        S = step_polynomial(gb)
        ser = rho_series(S, (Fraction(1), Fraction(1)), ST, 4)
        logt = (ser * scalar_inv(Fraction(4))).log()
        assert logt.component(2) == P(
            {(2, 0): Fraction(1, 2), (1, 1): Fraction(-1, 2), (0, 2): Fraction(1, 4)}
        )

    def test_odd_grades_have_odd_parity(self, tandem):
        S = step_polynomial(tandem)
        ser = rho_series(S, (Fraction(1), Fraction(1)), ST, 6)
        for g, comp in ser.comps.items():
            for e in comp.terms:
                assert (e[0] + e[1]) % 2 == g % 2
