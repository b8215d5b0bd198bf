"""Bundled model corpus.

The nineteen unweighted two-dimensional small-step models with a finite
group and nonvanishing alternating orbit sum, plus the large-step and
three-dimensional demonstration models with their literature numerators.

The sixteen order-4-group models are exactly the nondegenerate step sets
symmetric under x -> -x, up to the diagonal reflection that identifies
two of the seventeen raw sets; the remaining three are the two tandem
orientations (group order 6) and the Gouyou-Beauchamps model (order 8).
"""

from __future__ import annotations

from fractions import Fraction

from .laurent import LaurentPoly, RatFunc
from .model import Model

_COMPASS = {
    "N": (0, 1),
    "S": (0, -1),
    "E": (1, 0),
    "W": (-1, 0),
    "NE": (1, 1),
    "NW": (-1, 1),
    "SE": (1, -1),
    "SW": (-1, -1),
}


def model_from_compass(spec: str, name: str = "") -> Model:
    offsets = [_COMPASS[tok] for tok in spec.split("-")]
    return Model.from_offsets(offsets, name=name or spec)


def simple_walk() -> Model:
    return model_from_compass("N-S-E-W", "simple")


def diagonal_walk() -> Model:
    return model_from_compass("NE-NW-SE-SW", "diagonal")


def king_walk() -> Model:
    return model_from_compass("N-S-E-W-NE-NW-SE-SW", "king")


def tandem_walk() -> Model:
    return Model.from_offsets([(-1, 0), (0, 1), (1, -1)], name="tandem")


def reversed_tandem_walk() -> Model:
    return Model.from_offsets([(1, 0), (0, -1), (-1, 1)], name="tandem_rev")


def gouyou_beauchamps_walk() -> Model:
    return Model.from_offsets([(-1, 1), (1, -1), (-1, 0), (1, 0)], name="gb")


#: the 16 vertically symmetric class representatives (order-4 group)
_SYMMETRIC_SPECS = [
    "N-S-E-W",                    # simple
    "NE-NW-SE-SW",                # diagonal
    "N-S-E-W-NE-NW-SE-SW",        # king
    "N-S-NE-NW",
    "N-S-SE-SW",
    "N-S-E-W-NE-NW",
    "N-S-E-W-SE-SW",
    "N-NE-NW-SE-SW",
    "S-NE-NW-SE-SW",
    "E-W-NE-NW-SE-SW",
    "N-E-W-NE-NW-SE-SW",
    "S-E-W-NE-NW-SE-SW",
    "N-SE-SW",
    "S-NE-NW",
    "N-E-W-SE-SW",
    "S-E-W-NE-NW",
]


def orbit_summable_models() -> list[Model]:
    """The nineteen unweighted orbit-summable models."""
    out = [model_from_compass(spec) for spec in _SYMMETRIC_SPECS]
    out[0] = simple_walk()
    out[1] = diagonal_walk()
    out[2] = king_walk()
    out.extend([tandem_walk(), reversed_tandem_walk(), gouyou_beauchamps_walk()])
    return out


def large_step_walk() -> Model:
    """Large-step model with steps E, W, S and a long (-2, 1) jump."""
    return Model.from_offsets([(1, 0), (-1, 0), (0, -1), (-2, 1)], name="large_step")


def large_step_numerator() -> RatFunc:
    """Literature numerator N with q(k, l; n) = [x^(k+1) y^(l+1)] S^n N.

    The monomial normalization (denominator x^6 y^2) is the one validated
    against the counting oracle.
    """
    variables = ("x", "y")

    def poly(entries):
        return LaurentPoly(variables, {e: Fraction(c) for e, c in entries.items()})

    num = (
        poly({(2, 0): 1, (0, 0): 1})
        * poly({(1, 0): 1, (0, 1): 1})
        * poly({(0, 1): 1, (1, 0): -1})
        * poly({(2, 1): 1, (1, 0): -2, (0, 1): -1})
        * poly({(3, 0): 1, (1, 0): -1, (0, 1): -2})
    )
    return RatFunc(num, poly({(6, 2): 1}))


def orthant_walk_3d() -> Model:
    """Three-dimensional model with four steps and an order-8 twist group."""
    return Model.from_offsets(
        [(-1, -1, -1), (-1, -1, 1), (-1, 1, 0), (1, 0, 0)], name="orthant3d"
    )


def orthant_3d_numerator() -> RatFunc:
    """Literature numerator for the three-dimensional model (no shift)."""
    variables = ("x", "y", "z")

    def poly(entries):
        return LaurentPoly(variables, {e: Fraction(c) for e, c in entries.items()})

    num = (
        poly({(1, 0, 0): 1, (-1, 1, 0): -1, (-1, -1, 1): -1, (-1, -1, -1): -1})
        * poly({(0, 1, 0): 1, (0, -1, 1): -1, (0, -1, -1): -1})
        * poly({(0, 0, 1): 1, (0, 0, -1): -1})
    )
    return RatFunc.from_poly(num)


def registry() -> dict[str, Model]:
    """Name -> model map for the CLI and tests."""
    out = {}
    for m in orbit_summable_models():
        out[m.name] = m
    out["large_step"] = large_step_walk()
    out["orthant3d"] = orthant_walk_3d()
    return out


BUILTIN_NUMERATORS = {
    "large_step": large_step_numerator,
    "orthant3d": orthant_3d_numerator,
}
