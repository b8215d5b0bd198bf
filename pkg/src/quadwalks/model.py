"""Weighted step-set models and their structural diagnostics.

A model is a finite list of distinct nonzero integer offsets with positive
exact weights.  Everything downstream (kernel, group, saddle data,
expansions) is derived from it.  The text file format is line oriented:

    # comment
    dim 2
    name simple walk
    step 1 0 1
    step -1 0 1
    step 0 1 1/2

with weights as integers or ``p/q`` fractions.  Parsing and serialization
round-trip bit-exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import lattice
from .errors import DegenerateModel, InexactSqrt, NonzeroDrift, ParseError
from .field import Rad, scalar_sign, simplify_scalar
from .laurent import LaurentPoly

_VAR_NAMES = {2: ("x", "y"), 3: ("x", "y", "z")}


def poly_vars(dimension: int) -> tuple[str, ...]:
    """Conventional variable names for the step polynomial."""
    return _VAR_NAMES.get(dimension, tuple(f"x{i+1}" for i in range(dimension)))


@dataclass(frozen=True)
class Step:
    """One permissible step: integer offsets plus a positive exact weight.

    Weights in model files are rational; in-memory models produced by the
    Cramer transform may carry radical weights.
    """

    offsets: tuple[int, ...]
    weight: object = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "offsets", tuple(int(o) for o in self.offsets))
        w = self.weight
        if isinstance(w, int):
            w = Fraction(w)
        object.__setattr__(self, "weight", w)
        if all(o == 0 for o in self.offsets):
            raise ValueError("step offsets must not be the zero vector")
        if scalar_sign(w) <= 0:
            raise ValueError("step weight must be positive")


@dataclass(frozen=True)
class Model:
    """Finite weighted step set in d dimensions."""

    dimension: int
    steps: tuple[Step, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if self.dimension < 1:
            raise ValueError("dimension must be positive")
        if len(self.steps) < 2:
            raise ValueError("a model needs at least 2 steps")
        offsets = [s.offsets for s in self.steps]
        if any(len(o) != self.dimension for o in offsets):
            raise ValueError("step offset length must equal the dimension")
        if len(set(offsets)) != len(offsets):
            raise ValueError("step offsets must be pairwise distinct")

    @classmethod
    def from_offsets(cls, offsets, weights=None, name: str = "", dimension: Optional[int] = None) -> "Model":
        offsets = [tuple(o) for o in offsets]
        if dimension is None:
            dimension = len(offsets[0])
        if weights is None:
            weights = [Fraction(1)] * len(offsets)
        steps = tuple(Step(o, w) for o, w in zip(offsets, weights))
        return cls(dimension, steps, name)

    @property
    def offsets(self) -> tuple[tuple[int, ...], ...]:
        return tuple(s.offsets for s in self.steps)

    @property
    def small_steps(self) -> bool:
        return all(all(abs(o) <= 1 for o in s.offsets) for s in self.steps)

    def weight_of(self, offsets) -> object:
        for s in self.steps:
            if s.offsets == tuple(offsets):
                return s.weight
        return Fraction(0)

    def __str__(self):
        return self.name or f"model({', '.join(map(str, self.offsets))})"


@dataclass(frozen=True)
class Theta:
    """Correlation data of a zero-drift two-dimensional model.

    ``cos_value`` is the exact argument of the arccos; ``pi_over_theta``
    is set when the angle is one of the recognized rational multiples of
    pi (which covers every finite-group model handled here).
    """

    cos_value: object
    pi_over_theta: Optional[Fraction]


@dataclass(frozen=True)
class ModelDiagnostics:
    drift: tuple
    nondegenerate: bool
    period: int
    theta: Optional[Theta]
    pi_over_theta: Optional[Fraction]


# ----------------------------------------------------------------------
# basic quantities


def step_polynomial(model: Model) -> LaurentPoly:
    """The weighted step Laurent polynomial sum_s w_s x^s."""
    variables = poly_vars(model.dimension)
    return LaurentPoly(variables, {s.offsets: s.weight for s in model.steps})


def drift(model: Model) -> tuple:
    """Component-wise sum of weight * offset."""
    out = []
    for i in range(model.dimension):
        total = Fraction(0)
        for s in model.steps:
            total = total + s.weight * s.offsets[i]
        out.append(simplify_scalar(total))
    return tuple(out)


def has_zero_drift(model: Model) -> bool:
    return all(not d for d in drift(model))


# ----------------------------------------------------------------------
# non-degeneracy: the origin must lie strictly inside the convex hull of
# the offsets.  Decided exactly over the rationals: the origin fails to be
# interior iff some closed half-space {n . x >= 0} contains every offset;
# a witness normal can always be rotated onto the span of d-1 offsets, so
# checking the null directions of all (d-1)-subsets is complete (after
# dealing with offset sets of deficient rank).


def _rank(vectors) -> int:
    rows = [list(map(Fraction, v)) for v in vectors]
    cols = len(rows[0]) if rows else 0
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def _null_direction(vectors, dim):
    """A nonzero rational vector orthogonal to all given vectors, or None."""
    rows = [list(map(Fraction, v)) for v in vectors]
    # reduced row echelon
    pivots = []
    r = 0
    for c in range(dim):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rows[r] = [a / rows[r][c] for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(dim) if c not in pivots]
    if not free:
        return None
    c0 = free[0]
    vec = [Fraction(0)] * dim
    vec[c0] = Fraction(1)
    for i, c in enumerate(pivots):
        vec[c] = -rows[i][c0]
    return vec


def check_nondegenerate(model: Model) -> bool:
    """True iff the origin lies strictly inside the hull of the offsets."""
    offsets = model.offsets
    d = model.dimension
    if _rank(offsets) < d:
        return False
    if d == 1:
        return any(o[0] > 0 for o in offsets) and any(o[0] < 0 for o in offsets)
    for subset in itertools.combinations(offsets, d - 1):
        if _rank(subset) < d - 1:
            continue
        n = _null_direction(subset, d)
        if n is None:
            continue
        dots = [sum(Fraction(o[i]) * n[i] for i in range(d)) for o in offsets]
        if all(x >= 0 for x in dots) or all(x <= 0 for x in dots):
            return False
    return True


def periodicity(model: Model) -> int:
    """Smallest m with all offsets congruent mod the difference lattice
    and the common coset of order m in the quotient."""
    return lattice.coset_order(model.offsets)


# ----------------------------------------------------------------------
# correlation coefficient


# recognized cos(theta) values as (sign of cos, cos^2) -> pi/theta
_PI_OVER_THETA_BY_SQUARE = {
    (0, Fraction(0)): Fraction(2),       # theta = pi/2
    (1, Fraction(1, 4)): Fraction(3),    # pi/3
    (-1, Fraction(1, 4)): Fraction(3, 2),
    (1, Fraction(1, 2)): Fraction(4),    # pi/4
    (-1, Fraction(1, 2)): Fraction(4, 3),
    (1, Fraction(3, 4)): Fraction(6),    # pi/6
    (-1, Fraction(3, 4)): Fraction(6, 5),
    (-1, Fraction(1)): Fraction(1),      # pi
}


def correlation_coefficient(model: Model) -> Theta:
    """Exact arccos argument of the correlation angle, zero-drift 2-d only.

    The argument is -sum(ij w) / sqrt(sum(i^2 w) * sum(j^2 w)).  The
    rational-multiple-of-pi cases are recognized from the exact square of
    the argument together with its sign, which avoids square roots of the
    (possibly radical) second moments; the argument itself is reported
    exactly when the square root stays in the radical class, else as a
    certified interval.  Apply the Cramer transform first for models with
    nonzero drift.
    """
    if model.dimension != 2:
        raise ValueError("correlation coefficient is defined for 2-d models")
    if not has_zero_drift(model):
        raise NonzeroDrift("correlation coefficient requires zero drift")
    sxx = Fraction(0)
    syy = Fraction(0)
    sxy = Fraction(0)
    for s in model.steps:
        (i, j) = s.offsets
        sxx = sxx + s.weight * (i * i)
        syy = syy + s.weight * (j * j)
        sxy = sxy + s.weight * (i * j)
    square = simplify_scalar((sxy * sxy) * _inv(sxx * syy))
    sign = -scalar_sign(sxy)
    pot = None
    if isinstance(square, Fraction):
        pot = _PI_OVER_THETA_BY_SQUARE.get((sign, square))
    if not sxy:
        arg = Fraction(0)
    else:
        try:
            arg = simplify_scalar((-sxy) * _inv(rad_sqrt_scalar(sxx * syy)))
        except InexactSqrt:
            from .field import Ball

            arg = Ball.from_scalar(square, 40).sqrt() * sign
    return Theta(cos_value=arg, pi_over_theta=pot)


def _inv(x):
    from .field import scalar_inv

    return scalar_inv(x)


def rad_sqrt_scalar(x):
    from .field import rad_sqrt

    return simplify_scalar(rad_sqrt(x))


# ----------------------------------------------------------------------
# transforms


def reverse(model: Model) -> Model:
    """Same weights, negated offsets."""
    steps = tuple(Step(tuple(-o for o in s.offsets), s.weight) for s in model.steps)
    name = model.name + " reversed" if model.name else ""
    return Model(model.dimension, steps, name)


def cramer_transform(model: Model):
    """Reweight w -> w * prod alpha_i^{s_i} so the drift vanishes.

    The multipliers are exactly the coordinates of the dominant saddle
    point of the step polynomial.  Returns ``(transformed, multipliers)``.
    """
    if not check_nondegenerate(model):
        raise DegenerateModel("Cramer transform needs a nondegenerate model")
    if has_zero_drift(model):
        return model, tuple(Fraction(1) for _ in range(model.dimension))
    from . import saddle

    point, _gamma = saddle.find_dominant(model)
    steps = []
    for s in model.steps:
        w = s.weight
        for alpha, o in zip(point, s.offsets):
            if o:
                w = w * (alpha ** o if o > 0 else _inv(alpha) ** (-o))
        steps.append(Step(s.offsets, simplify_scalar(w)))
    name = model.name + " (drift-free)" if model.name else ""
    return Model(model.dimension, tuple(steps), name), tuple(point)


def diagnose(model: Model) -> ModelDiagnostics:
    """Drift, non-degeneracy, period and (2-d) correlation angle."""
    dr = drift(model)
    nondeg = check_nondegenerate(model)
    period = periodicity(model)
    theta = None
    if model.dimension == 2 and nondeg:
        target = model if all(not x for x in dr) else cramer_transform(model)[0]
        theta = correlation_coefficient(target)
    return ModelDiagnostics(
        drift=dr,
        nondegenerate=nondeg,
        period=period,
        theta=theta,
        pi_over_theta=theta.pi_over_theta if theta else None,
    )


# ----------------------------------------------------------------------
# file format


def serialize_model(model: Model) -> str:
    lines = [f"dim {model.dimension}"]
    if model.name:
        lines.append(f"name {model.name}")
    for s in model.steps:
        if not isinstance(s.weight, Fraction):
            raise ValueError("only rational weights are serializable")
        w = str(s.weight.numerator) if s.weight.denominator == 1 else str(s.weight)
        lines.append("step " + " ".join(map(str, s.offsets)) + " " + w)
    return "\n".join(lines) + "\n"


def parse_model(text: str) -> Model:
    dim = None
    name = ""
    steps: list[Step] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "dim":
            if dim is not None:
                raise ParseError(f"line {lineno}: duplicate dim")
            try:
                dim = int(parts[1])
            except (IndexError, ValueError) as exc:
                raise ParseError(f"line {lineno}: bad dim") from exc
        elif parts[0] == "name":
            name = raw.split(None, 1)[1].strip() if len(parts) > 1 else ""
        elif parts[0] == "step":
            if dim is None:
                raise ParseError(f"line {lineno}: step before dim")
            if len(parts) != dim + 2:
                raise ParseError(f"line {lineno}: step needs {dim} offsets and a weight")
            try:
                offs = tuple(int(p) for p in parts[1 : dim + 1])
                weight = Fraction(parts[dim + 1])
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"line {lineno}: bad step entry") from exc
            try:
                steps.append(Step(offs, weight))
            except ValueError as exc:
                raise ParseError(f"line {lineno}: {exc}") from exc
        else:
            raise ParseError(f"line {lineno}: unknown directive {parts[0]!r}")
    if dim is None:
        raise ParseError("missing dim line")
    try:
        return Model(dim, tuple(steps), name)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def load_model(path) -> Model:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_model(fh.read())
