"""Kernel decomposition, group closure, orbit sums, certificates."""

from fractions import Fraction

import pytest

from quadwalks import corpus
from quadwalks.errors import GroupInfinite, NotSmallSteps
from quadwalks.field import RootOfUnity
from quadwalks.group import (
    certify_orbit_summable,
    generators,
    group_closure,
    kernel,
    orbit_sum,
)
from quadwalks.laurent import LaurentPoly, RatFunc
from quadwalks.model import Model, reverse, step_polynomial
from quadwalks.saddle import associated_saddles

XY = ("x", "y")
XYT = ("x", "y", "t")


def P(variables, entries):
    return LaurentPoly(variables, {tuple(e): Fraction(c) for e, c in entries.items()})


class TestKernel:
    def test_reassembly(self, gb, simple, tandem):
        for model in (gb, simple, tandem):
            dec = kernel(model)
            y = LaurentPoly.monomial(XYT, (0, 1, 0))
            assert dec.a * y * y + dec.b * y + dec.c == dec.kernel
            x = LaurentPoly.monomial(XYT, (1, 0, 0))
            assert dec.a_tilde * x * x + dec.b_tilde * x + dec.c_tilde == dec.kernel

    def test_simple_walk_triple(self, simple):
        dec = kernel(simple)
        assert dec.a == P(XYT, {(1, 0, 1): -1})                      # -t x
        assert dec.b == P(XYT, {(1, 0, 0): 1, (2, 0, 1): -1, (0, 0, 1): -1})
        assert dec.c == P(XYT, {(1, 0, 1): -1})

    def test_all_six_nonzero(self):
        for model in corpus.orbit_summable_models():
            dec = kernel(model)
            assert all(
                p
                for p in (dec.a, dec.b, dec.c, dec.a_tilde, dec.b_tilde, dec.c_tilde)
            )

    def test_large_steps_rejected(self, large_step):
        with pytest.raises(NotSmallSteps):
            kernel(large_step)


class TestGenerators:
    def test_simple_walk_phi(self, simple):
        phi, psi = generators(simple)
        # c(x)/a(x) = 1, so Phi: y -> 1/y
        assert phi.images[1] == RatFunc(P(XY, {(0, 0): 1}), P(XY, {(0, 1): 1}))
        assert psi.images[0] == RatFunc(P(XY, {(0, 0): 1}), P(XY, {(1, 0): 1}))

    def test_involutions(self, gb, tandem):
        for model in (gb, tandem):
            for gen in generators(model):
                twice = [im.compose(list(gen.images)) for im in gen.images]
                assert twice[0] == RatFunc.variable(XY, "x")
                assert twice[1] == RatFunc.variable(XY, "y")

    def test_fix_step_polynomial(self):
        for model in corpus.orbit_summable_models():
            S = RatFunc.from_poly(step_polynomial(model))
            for el in group_closure(model):
                assert S.compose(list(el.images)) == S


class TestClosure:
    def test_orders(self, simple, gb, tandem):
        assert len(group_closure(simple)) == 4
        assert len(group_closure(gb)) == 8
        assert len(group_closure(tandem)) == 6

    def test_signs_by_word_length(self, gb):
        for el in group_closure(gb):
            assert el.sign == (-1) ** len(el.word)

    def test_infinite_group_detected(self):
        # all eight steps plus NE doubled is fine; a classic infinite-group
        # model: {N, E, SW} reversed Kreweras-like with a tweak
        m = Model.from_offsets([(1, 1), (-1, 0), (0, -1), (1, 0)])
        with pytest.raises(GroupInfinite):
            group_closure(m, max_order=24)


class TestOrbitSum:
    def test_gb_matches_classical_numerator(self, gb):
        os = orbit_sum(gb)
        f1 = P(XY, {(2, 0): 1, (0, 0): -1})
        f2 = P(XY, {(0, 1): 1, (0, 0): -1})
        f3 = P(XY, {(4, 0): 1, (0, 3): 1, (2, 1): -1, (2, 2): -1})
        expected = RatFunc(-(f1 * f2 * f3), P(XY, {(3, 2): 1}))
        assert os.numerator == expected

    def test_simple_walk_factorized(self, simple):
        os = orbit_sum(simple)
        expected = RatFunc.from_poly(
            P(XY, {(1, 0): 1, (-1, 0): -1})
        ) * RatFunc.from_poly(P(XY, {(0, 1): 1, (0, -1): -1}))
        assert os.numerator == expected

    def test_vanishes_at_dominant_saddle(self):
        from quadwalks.saddle import find_dominant, numerator_regular_at

        for model in corpus.orbit_summable_models():
            point, _ = find_dominant(model)
            regular, value = numerator_regular_at(point, orbit_sum(model))
            assert regular and value == 0

    def test_twist_equivariance(self, gb, tandem):
        # psi(alpha x, beta y) = alpha psi(x, y) and the S-periodicity
        # S(alpha x, beta y) = zeta S(x, y), as exact identities
        for model in (gb, tandem):
            S = step_polynomial(model)
            phi, psi = generators(model)
            for twist in associated_saddles(model):
                ax, ay = (a.as_complex() for a in twist.alphas)
                zeta = twist.zeta.as_complex()
                scaled = [
                    RatFunc.from_poly(P(XY, {(1, 0): 1}) * ax),
                    RatFunc.from_poly(P(XY, {(0, 1): 1}) * ay),
                ]
                lhs = RatFunc.from_poly(S).compose(scaled)
                assert lhs == RatFunc.from_poly(S) * zeta
                psi_x = psi.images[0]
                assert psi_x.compose(scaled) == psi_x * ax
                phi_y = phi.images[1]
                assert phi_y.compose(scaled) == phi_y * ay


class TestCertificate:
    def test_gb_origin(self, gb):
        assert certify_orbit_summable(gb, depth=8).passed

    def test_simple_from_interior_start(self, simple):
        assert certify_orbit_summable(simple, 2, 0, depth=8).passed

    def test_corrupted_numerator_fails(self, gb):
        os = orbit_sum(gb)
        bad_terms = dict(os.numerator.num.terms)
        key = next(iter(bad_terms))
        bad_terms[key] = -bad_terms[key]
        bad = RatFunc(LaurentPoly(XY, bad_terms), os.numerator.den)
        report = certify_orbit_summable(gb, numerator=bad, depth=4)
        assert not report.passed
        assert report.counterexample is not None
        (_kl, n, extracted, counted) = report.counterexample
        assert extracted != counted and n <= 4

    def test_reversed_model_certifies(self, tandem):
        assert certify_orbit_summable(reverse(tandem), depth=6).passed
