"""Truncated graded series with polynomial components.

The grading unit is ``n**(-1/2)``: a series is a finite map
``grade -> LaurentPoly`` truncated at a fixed maximum grade.  Components
store the *real* polynomials ``rho_g`` of the convention

    actual term at grade g  =  i**g * rho_g * n**(-g/2),

which keeps every coefficient real (or exactly complex, for twisted
saddles) throughout the saddle-point computation: products respect the
convention automatically because grades add.  The only operation that has
to compensate for it is multiplication by ``n`` itself (grade shift by
-2), which picks up a factor ``i**2 = -1``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .errors import NonUnitConstantTerm
from .field import scalar_inv
from .laurent import LaurentPoly


class GradedSeries:
    """Finite graded series; immutable by convention."""

    __slots__ = ("vars", "truncation", "comps")

    def __init__(self, variables, truncation: int, comps: Mapping[int, LaurentPoly] | None = None):
        self.vars = tuple(variables)
        self.truncation = int(truncation)
        clean: dict[int, LaurentPoly] = {}
        if comps:
            for g, p in comps.items():
                if g < 0:
                    raise ValueError("negative grades are not representable")
                if g <= self.truncation and p:
                    clean[g] = p
        self.comps = clean

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, variables, truncation) -> "GradedSeries":
        return cls(variables, truncation, {})

    @classmethod
    def one(cls, variables, truncation) -> "GradedSeries":
        return cls(variables, truncation, {0: LaurentPoly.constant(variables, 1)})

    @classmethod
    def from_scalar(cls, variables, truncation, c) -> "GradedSeries":
        return cls(variables, truncation, {0: LaurentPoly.constant(variables, c)})

    def component(self, g: int) -> LaurentPoly:
        return self.comps.get(g, LaurentPoly.zero(self.vars))

    def grades(self):
        return sorted(self.comps)

    def min_grade(self):
        return min(self.comps) if self.comps else None

    def __bool__(self):
        return bool(self.comps)

    def __eq__(self, other):
        if not isinstance(other, GradedSeries):
            return NotImplemented
        return (
            self.vars == other.vars
            and self.truncation == other.truncation
            and self.comps == other.comps
        )

    # -- arithmetic -------------------------------------------------------

    def _common_truncation(self, other):
        return min(self.truncation, other.truncation)

    def __add__(self, other):
        if not isinstance(other, GradedSeries):
            return NotImplemented
        tr = self._common_truncation(other)
        comps = {g: p for g, p in self.comps.items() if g <= tr}
        for g, p in other.comps.items():
            if g > tr:
                continue
            s = comps.get(g)
            comps[g] = p if s is None else s + p
        return GradedSeries(self.vars, tr, comps)

    def __neg__(self):
        return GradedSeries(self.vars, self.truncation, {g: -p for g, p in self.comps.items()})

    def __sub__(self, other):
        if not isinstance(other, GradedSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, GradedSeries):
            tr = self._common_truncation(other)
            comps: dict[int, LaurentPoly] = {}
            for g1, p1 in self.comps.items():
                for g2, p2 in other.comps.items():
                    g = g1 + g2
                    if g > tr:
                        continue
                    prod = p1 * p2
                    s = comps.get(g)
                    comps[g] = prod if s is None else s + prod
            return GradedSeries(self.vars, tr, comps)
        # scalar or polynomial multiplier at grade 0
        return GradedSeries(
            self.vars, self.truncation, {g: p * other for g, p in self.comps.items()}
        )

    __rmul__ = __mul__

    def scale(self, c) -> "GradedSeries":
        return self * c

    def truncate(self, truncation: int) -> "GradedSeries":
        return GradedSeries(self.vars, min(truncation, self.truncation), self.comps)

    def extend_truncation(self, truncation: int) -> "GradedSeries":
        """Raise the stated truncation (components beyond stay absent)."""
        return GradedSeries(self.vars, truncation, self.comps)

    def shift(self, delta: int) -> "GradedSeries":
        """Multiply by the formal grade unit to the ``delta`` power."""
        comps = {}
        for g, p in self.comps.items():
            g2 = g + delta
            if g2 < 0:
                raise ValueError("shift below grade zero")
            if g2 <= self.truncation:
                comps[g2] = p
        return GradedSeries(self.vars, self.truncation, comps)

    def times_n(self) -> "GradedSeries":
        """Multiply by n (grade -2 in the n**(-1/2) grading).

        In the i**g component convention the regrade costs a factor
        i**2 = -1 per application.
        """
        comps = {}
        for g, p in self.comps.items():
            if g < 2:
                raise ValueError("times_n would create a negative grade")
            comps[g - 2] = -p
        return GradedSeries(self.vars, self.truncation, comps)

    # -- analytic operations ------------------------------------------------

    def _split_unit(self):
        c0 = self.component(0)
        if not c0.is_constant():
            raise NonUnitConstantTerm("grade-0 component must be a constant")
        return c0.constant_term()

    def exp(self) -> "GradedSeries":
        """exp of a series with zero constant term."""
        if self._split_unit():
            raise NonUnitConstantTerm("exp needs a zero grade-0 component")
        out = GradedSeries.one(self.vars, self.truncation)
        term = GradedSeries.one(self.vars, self.truncation)
        for j in range(1, self.truncation + 1):
            term = (term * self) * Fraction(1, j)
            if not term:
                break
            out = out + term
        return out

    def log1p(self) -> "GradedSeries":
        """log(1 + self) for a series with zero constant term."""
        if self._split_unit():
            raise NonUnitConstantTerm("log1p needs a zero grade-0 component")
        out = GradedSeries.zero(self.vars, self.truncation)
        term = GradedSeries.one(self.vars, self.truncation)
        for j in range(1, self.truncation + 1):
            term = term * self
            if not term:
                break
            out = out + term * Fraction((-1) ** (j + 1), j)
        return out

    def log(self) -> "GradedSeries":
        """log of a series with unit (invertible constant) grade-0 term.

        Only defined up to the additive constant log(c0), which the engine
        accounts for separately; this returns log(self / c0).
        """
        c0 = self._split_unit()
        if not c0:
            raise NonUnitConstantTerm("log needs an invertible constant term")
        u = (self * scalar_inv(c0)) - GradedSeries.one(self.vars, self.truncation)
        return u.log1p()

    def inverse(self) -> "GradedSeries":
        """Multiplicative inverse; needs an invertible constant term."""
        c0 = self._split_unit()
        if not c0:
            raise NonUnitConstantTerm("inverse needs an invertible constant term")
        inv0 = scalar_inv(c0)
        u = GradedSeries.one(self.vars, self.truncation) - (self * inv0)
        out = GradedSeries.one(self.vars, self.truncation)
        term = GradedSeries.one(self.vars, self.truncation)
        for _ in range(1, self.truncation + 1):
            term = term * u
            if not term:
                break
            out = out + term
        return out * inv0

    def __str__(self):
        bits = [f"[{g}] {p}" for g, p in sorted(self.comps.items())]
        return f"GradedSeries(trunc={self.truncation}; " + "; ".join(bits) + ")"

    __repr__ = __str__
