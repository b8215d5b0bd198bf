"""Classical reference data for the bundled walk models.

Exact fixture polynomials from the literature: the known ladder basis of
discrete polyharmonic functions for the simple walk (in shifted
coordinates, quadrant {k, l >= 1}), the displayed asymptotic coefficient
functions of the classic models, and the continuous heat-kernel
counterpart used for the scaling-limit comparison.  These are golden
values for tests and demos; everything here is checkable against the
engine and the counting oracle.
"""

from __future__ import annotations

from fractions import Fraction

from .field import ScaledCoefficient
from .laurent import LaurentPoly
from .polyharmonic import PolyBasis, PolyharmonicFn

KL = ("k", "l")
KLUV = ("k", "l", "u", "v")


def _poly(variables, entries) -> LaurentPoly:
    return LaurentPoly(variables, {tuple(e): Fraction(c) for e, c in entries.items()})


def _mul(*polys):
    out = polys[0]
    for p in polys[1:]:
        out = out * p
    return out


def _shift_vars_up(poly: LaurentPoly) -> LaurentPoly:
    """Substitute every variable w -> w + 1 (shifted -> unshifted)."""
    out = LaurentPoly.constant(poly.vars, 0)
    n = len(poly.vars)
    for e, c in poly.terms.items():
        term = LaurentPoly.constant(poly.vars, c)
        for i, a in enumerate(e):
            unit = _poly(poly.vars, {tuple(1 if j == i else 0 for j in range(n)): 1, (0,) * n: 1})
            term = term * unit ** a
        out = out + term
    return out


# ----------------------------------------------------------------------
# simple walk: polyharmonic ladder basis, shifted coordinates


def simple_walk_basis_fixture(model) -> PolyBasis:
    """The known ladder basis h_n^m of the simple walk (shifted quadrant).

    Scalings follow the classical tables; due to the step symmetry the
    adjoint basis equals this one.
    """
    k = {(1, 0): 1}
    l = {(0, 1): 1}
    entries = {
        (1, 1): _poly(KL, {(1, 1): 1}),
        (1, 2): _mul(_poly(KL, {(1, 1): 1}), _poly(KL, {(1, 0): 1, (0, 1): -1}), _poly(KL, {(1, 0): 1, (0, 1): 1})),
        (1, 3): _mul(
            _poly(KL, {(1, 1): 1}),
            _poly(KL, {(0, 0): 14, (2, 0): -5, (4, 0): 3, (0, 2): -5, (2, 2): -10, (0, 4): 3}),
        ),
        (2, 1): _mul(_poly(KL, {(1, 1): 1}), _poly(KL, {(0, 1): 1, (0, 0): -1}), _poly(KL, {(0, 1): 1, (0, 0): 1})),
        (2, 2): _mul(
            _poly(KL, {(1, 1): 1}),
            _poly(KL, {(0, 1): 1, (0, 0): -1}),
            _poly(KL, {(0, 1): 1, (0, 0): 1}),
            _poly(KL, {(0, 0): 7, (2, 0): 5, (0, 2): -3}),
        ),
        (3, 1): _mul(
            _poly(KL, {(1, 1): 1}),
            _poly(KL, {(0, 1): 1, (0, 0): -2}),
            _poly(KL, {(0, 1): 1, (0, 0): -1}),
            _poly(KL, {(0, 1): 1, (0, 0): 1}),
            _poly(KL, {(0, 1): 1, (0, 0): 2}),
        ),
    }
    fns = {
        key: PolyharmonicFn(
            poly=poly,
            eigenvalue=Fraction(4),
            prefactor=(),
            claimed_order=key[0],
            origin_offset=1,
        )
        for key, poly in entries.items()
    }
    return PolyBasis(
        model=model,
        eigenvalue=Fraction(4),
        entries=fns,
        origin_offset=1,
        ladder_checked=False,
    )


def simple_walk_vp_fixture(p: int, shifted: bool = True) -> LaurentPoly:
    """Displayed v_p(k, l, u, v) of the simple walk (up to one scalar)."""
    kluv = _poly(KLUV, {(1, 1, 1, 1): 1})
    if p == 1:
        poly = kluv
    elif p == 2:
        poly = kluv * _poly(
            KLUV,
            {(0, 0, 0, 0): 7, (2, 0, 0, 0): 2, (0, 2, 0, 0): 2, (0, 0, 2, 0): 2, (0, 0, 0, 2): 2},
        )
    elif p == 3:
        poly = kluv * _poly(
            KLUV,
            {
                (0, 0, 0, 0): 167,
                (2, 0, 0, 0): 140, (4, 0, 0, 0): 12,
                (0, 2, 0, 0): 140, (2, 2, 0, 0): 24, (0, 4, 0, 0): 12,
                (0, 0, 2, 0): 140, (2, 0, 2, 0): 40, (0, 2, 2, 0): 24, (0, 0, 4, 0): 12,
                (0, 0, 0, 2): 140, (2, 0, 0, 2): 24, (0, 2, 0, 2): 40, (0, 0, 2, 2): 24,
                (0, 0, 0, 4): 12,
            },
        )
    else:
        raise ValueError("fixtures cover p in {1, 2, 3}")
    return poly if shifted else _shift_vars_up(poly)


#: decomposition coefficients of the displayed v_p over the fixture basis;
#: keys are ((n, m), (n', m')) endpoint/start basis indices.
SIMPLE_WALK_DECOMPOSITION = {
    1: {((1, 1), (1, 1)): Fraction(1)},
    2: {
        ((2, 1), (1, 1)): Fraction(4),
        ((1, 1), (2, 1)): Fraction(4),
        ((1, 2), (1, 1)): Fraction(2),
        ((1, 1), (1, 2)): Fraction(2),
        ((1, 1), (1, 1)): Fraction(15),
    },
    3: {
        ((3, 1), (1, 1)): Fraction(192, 5),
        ((1, 1), (3, 1)): Fraction(192, 5),
        ((2, 2), (1, 1)): Fraction(64, 5),
        ((1, 1), (2, 2)): Fraction(64, 5),
        ((1, 3), (1, 1)): Fraction(4),
        ((1, 1), (1, 3)): Fraction(4),
        ((2, 1), (1, 2)): Fraction(64),
        ((1, 2), (2, 1)): Fraction(64),
        ((2, 1), (2, 1)): Fraction(128),
        ((1, 2), (1, 2)): Fraction(24),
        ((2, 1), (1, 1)): Fraction(576),
        ((1, 1), (2, 1)): Fraction(576),
        ((1, 2), (1, 1)): Fraction(288),
        ((1, 1), (1, 2)): Fraction(288),
        ((1, 1), (1, 1)): Fraction(951),
    },
}

#: distinct coefficient values expected in the decompositions
SIMPLE_WALK_DECOMPOSITION_VALUES = {
    1: {Fraction(1)},
    2: {Fraction(4), Fraction(2), Fraction(15)},
    3: {
        Fraction(192, 5), Fraction(64, 5), Fraction(4), Fraction(64),
        Fraction(128), Fraction(24), Fraction(576), Fraction(288), Fraction(951),
    },
}


def simple_walk_v3_scaling_limit() -> LaurentPoly:
    """Displayed scaling limit of v_3 (shifted coordinates)."""
    return _poly(KLUV, {(1, 1, 1, 1): 1}) * _poly(
        KLUV,
        {
            (4, 0, 0, 0): 3, (2, 2, 0, 0): 6, (0, 4, 0, 0): 3,
            (2, 0, 2, 0): 10, (0, 2, 2, 0): 6, (0, 0, 4, 0): 3,
            (2, 0, 0, 2): 6, (0, 2, 0, 2): 10, (0, 0, 2, 2): 6, (0, 0, 0, 4): 3,
        },
    )


def continuous_heat_kernel_f3() -> LaurentPoly:
    """Third coefficient of the continuous heat-kernel expansion.

    Differs from the discrete scaling limit exactly in the k^2 u^2 and
    l^2 v^2 coefficients (22 versus 10).
    """
    return _poly(KLUV, {(1, 1, 1, 1): 1}) * _poly(
        KLUV,
        {
            (4, 0, 0, 0): 3, (2, 2, 0, 0): 6, (0, 4, 0, 0): 3,
            (2, 0, 2, 0): 22, (0, 2, 2, 0): 6, (0, 0, 4, 0): 3,
            (2, 0, 0, 2): 6, (0, 2, 0, 2): 22, (0, 0, 2, 2): 6, (0, 0, 0, 4): 3,
        },
    )


# ----------------------------------------------------------------------
# Gouyou-Beauchamps model: displayed coefficient functions (from origin)


def gouyou_beauchamps_vp_display(p: int) -> LaurentPoly:
    """Exact displayed v_p(k, l) of the Gouyou-Beauchamps model."""
    base = _mul(
        _poly(KL, {(1, 0): 1, (0, 0): 1}),            # 1 + k
        _poly(KL, {(0, 1): 1, (0, 0): 1}),            # 1 + l
        _poly(KL, {(0, 0): 2, (1, 0): 1, (0, 1): 1}),  # 2 + k + l
        _poly(KL, {(0, 0): 3, (1, 0): 1, (0, 1): 2}),  # 3 + k + 2l
    )
    quad = {(0, 0): 35, (2, 0): 2, (1, 0): 8, (1, 1): 4, (0, 1): 12, (0, 2): 4}
    if p == 1:
        poly, scale = base, Fraction(64)
    elif p == 2:
        poly, scale = base * _poly(KL, quad), Fraction(-32)
    elif p == 3:
        q25 = dict(quad); q25[(0, 0)] = 25
        q61 = dict(quad); q61[(0, 0)] = 61
        poly, scale = base * _poly(KL, q25) * _poly(KL, q61), Fraction(8)
    else:
        raise ValueError("displays cover p in {1, 2, 3}")
    return poly.map_coefficients(lambda c: ScaledCoefficient(c * scale, Fraction(-1)))
