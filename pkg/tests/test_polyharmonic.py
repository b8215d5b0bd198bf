"""Laplacians, polyharmonicity verification, bases, decompositions."""

import random
from fractions import Fraction

import pytest

from quadwalks import corpus, reference_data as ref
from quadwalks.errors import DecompositionInfeasible
from quadwalks.expansion import interpolate_vp
from quadwalks.field import Rad, ScaledCoefficient
from quadwalks.laurent import LaurentPoly
from quadwalks.model import cramer_transform, reverse, step_polynomial
from quadwalks.polyharmonic import (
    PolyharmonicFn,
    apply_adjoint_laplacian,
    apply_laplacian,
    build_basis,
    conjugate_by_cramer,
    decompose,
    decomposition_index_set,
    leading_homogeneous,
    verify_multivariate_polyharmonic,
    verify_polyharmonic,
)

KL = ("k", "l")
KLUV = ("k", "l", "u", "v")


def P(entries, variables=KL):
    return LaurentPoly(variables, {tuple(e): Fraction(c) for e, c in entries.items()})


class TestLaplacian:
    def test_simple_walk_product_harmonic(self, simple):
        fn = PolyharmonicFn(poly=P({(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1}),
                            eigenvalue=Fraction(4))
        for pt in [(0, 0), (3, 0), (0, 5), (4, 7)]:
            assert apply_laplacian(simple, fn, pt, Fraction(4)) == 0

    def test_zero_function(self, simple):
        fn = PolyharmonicFn(poly=LaurentPoly.zero(KL), eigenvalue=Fraction(4))
        assert apply_laplacian(simple, fn, (2, 2), Fraction(4)) == 0

    def test_gb_v1_harmonic_at_origin(self, gb, gb_expansion):
        fn = PolyharmonicFn(poly=gb_expansion.v(1), eigenvalue=Fraction(4))
        assert not apply_laplacian(gb, fn, (0, 0), Fraction(4))

    def test_adjoint_equals_forward_for_symmetric(self, simple, gb):
        fn = PolyharmonicFn(poly=P({(2, 1): 3, (0, 0): 1}), eigenvalue=Fraction(4))
        for model in (simple, gb):
            for pt in [(0, 0), (2, 3), (5, 1)]:
                assert apply_laplacian(model, fn, pt, Fraction(4)) == apply_adjoint_laplacian(
                    model, fn, pt, Fraction(4)
                )

    def test_adjointness_inner_product(self, tandem):
        # <Lap f, g> = <f, AdjLap g> for finitely supported f, g on Z^2
        rng = random.Random(7)
        support = [(i, j) for i in range(-3, 6) for j in range(-3, 6)]
        f_vals = {pt: Fraction(rng.randrange(-5, 6)) for pt in support}
        g_vals = {pt: Fraction(rng.randrange(-5, 6)) for pt in support}
        f = lambda pt: f_vals.get(tuple(pt), Fraction(0))
        g = lambda pt: g_vals.get(tuple(pt), Fraction(0))
        window = [(i, j) for i in range(-8, 11) for j in range(-8, 11)]
        t = Fraction(3)
        lhs = sum(apply_laplacian(tandem, f, pt, t) * g(pt) for pt in window)
        rhs = sum(f(pt) * apply_adjoint_laplacian(tandem, g, pt, t) for pt in window)
        assert lhs == rhs


class TestVerifyPolyharmonic:
    @pytest.mark.parametrize("p", [1, 2, 3])
    def test_gb_vp(self, gb, gb_expansion, p):
        fn = PolyharmonicFn(poly=gb_expansion.v(p), eigenvalue=Fraction(4), claimed_order=p)
        assert verify_polyharmonic(gb, fn, p, window=((0, 30), (0, 30)))

    def test_gb_v2_fails_at_order_1(self, gb, gb_expansion):
        fn = PolyharmonicFn(poly=gb_expansion.v(2), eigenvalue=Fraction(4))
        result = verify_polyharmonic(gb, fn, 1, window=((0, 10), (0, 10)))
        assert not result and result.witness is not None

    def test_sw_kluv_sections_harmonic(self, simple, sw_multivariate):
        # v_1(k, l, u0, v0) is harmonic in (k, l) for each fixed start
        v1 = sw_multivariate.v(1)
        for (u0, v0) in [(0, 0), (1, 2), (3, 3)]:
            section = v1.eval_partial({"u": u0, "v": v0}).rename(KL)
            fn = PolyharmonicFn(poly=section, eigenvalue=Fraction(4))
            assert verify_polyharmonic(simple, fn, 1, window=((0, 20), (0, 20)))

    def test_recursive_structure(self, gb, gb_expansion):
        # Lap v_{p+1} = kappa v_p + r with r polyharmonic of degree <= p-1;
        # kappa fixed by matching leading coefficients
        for p in (1, 2):
            upper = PolyharmonicFn(poly=gb_expansion.v(p + 1), eigenvalue=Fraction(4))
            vp = gb_expansion.v(p)
            image_terms = {}
            # the polynomial image of the zero-extension Laplacian agrees
            # with the polynomial stencil wherever all neighbours are
            # rim-vanishing; use interior evaluation to fit kappa
            lead = vp.leading_term()
            from quadwalks.polyharmonic import _stencil_of_monomial  # noqa

            poly_image = LaurentPoly.zero(KL)
            S = step_polynomial(gb)
            for e, c in gb_expansion.v(p + 1).terms.items():
                mono_shifted = LaurentPoly.zero(KL)
                for s in gb.steps:
                    shift = LaurentPoly.constant(KL, s.weight)
                    km = P({(1, 0): 1, (0, 0): -s.offsets[0]})
                    lm = P({(0, 1): 1, (0, 0): -s.offsets[1]})
                    mono_shifted = mono_shifted + shift * km ** e[0] * lm ** e[1]
                mono_shifted = mono_shifted - LaurentPoly.monomial(KL, e) * Fraction(4)
                poly_image = poly_image + mono_shifted.map_coefficients(lambda f: f * c)
            kappa = poly_image.coefficient(lead[0]) / lead[1]
            residual = poly_image - vp.map_coefficients(lambda c: kappa * c)
            if p == 1:
                assert not residual  # degree <= 0 polyharmonic of order 0 is zero
            else:
                fn = PolyharmonicFn(poly=residual, eigenvalue=Fraction(4))
                assert verify_polyharmonic(gb, fn, p - 1, window=((0, 20), (0, 20)))


class TestMultivariate:
    def _sample_points(self, seed, count=60, lo=0, hi=15):
        rng = random.Random(seed)
        return [tuple(rng.randrange(lo, hi + 1) for _ in range(4)) for _ in range(count)]

    @pytest.mark.parametrize("p", [1, 2])
    def test_sw_multivariate(self, simple, sw_multivariate, p):
        pts = self._sample_points(p)
        res = verify_multivariate_polyharmonic(
            simple, sw_multivariate.v(p), p, pts, eigenvalue=Fraction(4)
        )
        assert res

    def test_commutation_on_nonkilled_orders(self, simple, sw_multivariate):
        # Lap AdjLap v_3 = AdjLap Lap v_3 pointwise (values nonzero)
        v3 = sw_multivariate.v(3)
        res = verify_multivariate_polyharmonic(
            simple, v3, 3, self._sample_points(3, count=25, hi=10),
            eigenvalue=Fraction(4),
        )
        assert res


class TestBasis:
    def test_sw_first_entries_match_fixtures_up_to_scalar(self, simple):
        basis = build_basis(simple, max_n=2, max_m=2, origin_offset=1)
        fix = ref.simple_walk_basis_fixture(simple)
        # h_1^1 and h_1^2 are scalar multiples of the classical displays
        for key in [(1, 1), (1, 2)]:
            mine = basis.entry(*key).poly
            ref_poly = fix.entry(*key).poly
            anchor = mine.leading_term()[0]
            lam = ref_poly.coefficient(anchor) / mine.coefficient(anchor)
            assert lam and mine.map_coefficients(lambda c: lam * c) == ref_poly

    def test_ladder_relation(self, simple):
        basis = build_basis(simple, max_n=3, max_m=2, origin_offset=1)
        assert basis.ladder_checked
        for (n, m), fn in basis.entries.items():
            if (n + 1, m) in basis.entries:
                upper = basis.entries[(n + 1, m)]
                for pt in [(1, 1), (2, 5), (7, 3)]:
                    assert apply_laplacian(simple, upper, pt, Fraction(4)) == fn.value(pt)

    def test_built_entry_spans_fixture(self, simple):
        # built h_2^1 differs from the classical display by a harmonic
        # correction and a scalar: check Lap agreement instead
        basis = build_basis(simple, max_n=2, max_m=1, origin_offset=1)
        fix = ref.simple_walk_basis_fixture(simple)
        built = basis.entry(2, 1)
        disp = fix.entry(2, 1)
        lap_built = [apply_laplacian(simple, built, (k, l), Fraction(4))
                     for k in range(1, 6) for l in range(1, 6)]
        lap_disp = [apply_laplacian(simple, disp, (k, l), Fraction(4))
                    for k in range(1, 6) for l in range(1, 6)]
        nz = next(i for i, v in enumerate(lap_disp) if v)
        lam = lap_disp[nz] / lap_built[nz]
        assert [v * lam for v in lap_built] == lap_disp

    def test_gb_basis_orders(self, gb):
        basis = build_basis(gb, max_n=2, max_m=2, origin_offset=0)
        for (n, m), fn in basis.entries.items():
            assert verify_polyharmonic(gb, fn, n, window=((0, 12), (0, 12)))


class TestDecomposition:
    def test_index_set_count(self):
        for p in (1, 2, 3, 4):
            assert len(decomposition_index_set(p)) == p * (p + 1) * (p + 2) * (p + 3) // 24

    @pytest.mark.parametrize("p", [1, 2])
    def test_sw_fixture_coefficients(self, simple, p):
        basis = ref.simple_walk_basis_fixture(simple)
        disp = ref.simple_walk_vp_fixture(p)
        dec = decompose(disp, basis, basis, p)
        got = {(a[:2], a[2:]): c for a, c in dec.coefficients.items()}
        assert got == ref.SIMPLE_WALK_DECOMPOSITION[p]

    def test_sw_v3_unique_decomposition(self, simple):
        # the order-3 display decomposes uniquely; all printed values match
        # except the h_1^2 x g_1^2 coefficient, which linear algebra forces
        # to 40 (the classical table prints 24, inconsistent with its own
        # v_3: see the coefficient of k^3 l u^3 v)
        basis = ref.simple_walk_basis_fixture(simple)
        disp = ref.simple_walk_vp_fixture(3)
        dec = decompose(disp, basis, basis, 3)
        got = {(a[:2], a[2:]): c for a, c in dec.coefficients.items()}
        expect = dict(ref.SIMPLE_WALK_DECOMPOSITION[3])
        assert got.pop(((1, 2), (1, 2))) == Fraction(40)
        expect.pop(((1, 2), (1, 2)))
        assert got == expect
        # the forced value: v_3's k^3 l u^3 v coefficient only arises from
        # h_1^2 x g_1^2
        assert disp.coefficient((3, 1, 3, 1)) == 40

    def test_symmetric_coefficients(self, simple):
        basis = ref.simple_walk_basis_fixture(simple)
        for p in (2, 3):
            dec = decompose(ref.simple_walk_vp_fixture(p), basis, basis, p)
            for (n, m, n2, m2), c in dec.coefficients.items():
                assert dec.coefficients.get((n2, m2, n, m)) == c

    def test_infeasible_detected(self, simple):
        basis = ref.simple_walk_basis_fixture(simple)
        junk = P({(9, 9, 9, 9): 1}, KLUV)
        with pytest.raises(DecompositionInfeasible):
            decompose(junk, basis, basis, 2)

    def test_built_basis_residual_zero(self, simple, sw_multivariate):
        # engine coefficients decompose with zero residual over built bases
        basis = build_basis(simple, max_n=3, max_m=3, origin_offset=0)
        adjoint = build_basis(reverse(simple), max_n=3, max_m=3, origin_offset=0)
        for p in (1, 2, 3):
            dec = decompose(sw_multivariate.v(p), basis, adjoint, p)
            assert dec.residual_zero
            assert dec.summand_count() <= p * (p + 1) * (p + 2) * (p + 3) // 24


class TestScalingLimit:
    def test_sw_v3_leading_part(self, sw_multivariate):
        # leading homogeneous part of v_3 equals the classical scaling
        # limit display up to one scalar
        v3 = sw_multivariate.v(3)
        # work in shifted coordinates: leading part is shift-invariant
        lead = leading_homogeneous(v3)
        display = ref.simple_walk_v3_scaling_limit()
        lead_display = leading_homogeneous(display)
        anchor = (5, 1, 1, 1)
        lam = lead.coefficient(anchor) / lead_display.coefficient(anchor)
        assert lead == lead_display.map_coefficients(lambda c: lam * c)

    def test_continuous_fixture_differs_in_two_coefficients(self):
        disc = leading_homogeneous(ref.simple_walk_v3_scaling_limit())
        cont = leading_homogeneous(ref.continuous_heat_kernel_f3())
        diff = {
            e
            for e in set(disc.terms) | set(cont.terms)
            if disc.coefficient(e) != cont.coefficient(e)
        }
        assert diff == {(3, 1, 3, 1), (1, 3, 1, 3)}
        assert disc.coefficient((3, 1, 3, 1)) == 10
        assert cont.coefficient((3, 1, 3, 1)) == 22

    def test_homogeneous_fixed_point(self):
        kluv = P({(1, 1, 1, 1): 1}, KLUV)
        assert leading_homogeneous(kluv) == kluv


class TestConjugation:
    def test_identity_multipliers(self, simple):
        fn = PolyharmonicFn(poly=P({(1, 1): 1}), eigenvalue=Fraction(4))
        out = conjugate_by_cramer(fn, (Fraction(1), Fraction(1)))
        assert out.poly == fn.poly
        assert all(b == 1 for b in out.prefactor)

    def test_involution(self, simple):
        fn = PolyharmonicFn(poly=P({(1, 1): 1}), eigenvalue=Fraction(4))
        alpha = (Rad.root(3, 2), Rad.root(2, 2))
        inverse = tuple(1 / a for a in alpha)
        roundtrip = conjugate_by_cramer(conjugate_by_cramer(fn, alpha), inverse)
        assert roundtrip.poly == fn.poly
        assert all(b == 1 for b in roundtrip.prefactor)

    def test_large_step_v1_strips_to_transformed_harmonic(self, large_step, large_step_expansion):
        # engine v_1 carries the prefactor (1/sqrt3)^(k+l); the bare
        # polynomial is harmonic for the drift-free transformed model
        transformed, mult = cramer_transform(large_step)
        gamma = large_step_expansion.gamma
        bare = PolyharmonicFn(poly=large_step_expansion.v(1), eigenvalue=gamma)
        assert verify_polyharmonic(transformed, bare, 1, window=((0, 15), (0, 15)))
        # and with the prefactor restored it is harmonic for the original
        dressed = conjugate_by_cramer(bare, mult)
        assert verify_polyharmonic(large_step, dressed, 1, window=((0, 15), (0, 15)))
