"""Sparse multivariate Laurent polynomials and canonical rational functions.

Coefficients are duck-typed scalars (Fraction, Rad, Ball, ComplexExact,
ScaledCoefficient).  Terms are kept in a dict keyed by integer exponent
vectors; zero coefficients are never stored, so structural equality is
exact equality.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DivisionByZero, ParseError, PoleAtPoint
from .field import as_exact, parse_scalar, scalar_inv, serialize_scalar_monomial

Exponents = tuple[int, ...]


def grlex_key(expts: Exponents):
    """Graded-lexicographic sort key (total degree, then lex)."""
    return (sum(expts), expts)


class LaurentPoly:
    """Sparse Laurent polynomial over an ordered variable tuple."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponents, object] | None = None):
        self.vars = tuple(variables)
        clean: dict[Exponents, object] = {}
        if terms:
            for e, c in terms.items():
                if len(e) != len(self.vars):
                    raise ValueError("exponent vector length mismatch")
                c = as_exact(c)
                if c:
                    clean[tuple(e)] = c
        self.terms = clean

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, variables) -> "LaurentPoly":
        return cls(variables, {})

    @classmethod
    def constant(cls, variables, c) -> "LaurentPoly":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def monomial(cls, variables, expts: Exponents, c=1) -> "LaurentPoly":
        return cls(variables, {tuple(expts): c})

    @classmethod
    def variable(cls, variables, name: str) -> "LaurentPoly":
        e = [0] * len(variables)
        e[tuple(variables).index(name)] = 1
        return cls(variables, {tuple(e): Fraction(1)})

    # -- basic structure --------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def is_monomial(self) -> bool:
        return len(self.terms) <= 1

    def is_constant(self) -> bool:
        return all(all(x == 0 for x in e) for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def coefficient(self, expts: Exponents):
        return self.terms.get(tuple(expts), Fraction(0))

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        if not self.terms:
            return 0
        i = self.vars.index(name)
        return max(e[i] for e in self.terms)

    def min_exponents(self) -> Exponents:
        if not self.terms:
            return (0,) * len(self.vars)
        return tuple(min(e[i] for e in self.terms) for i in range(len(self.vars)))

    def max_exponents(self) -> Exponents:
        if not self.terms:
            return (0,) * len(self.vars)
        return tuple(max(e[i] for e in self.terms) for i in range(len(self.vars)))

    def leading_term(self):
        """(exponents, coefficient) of the graded-lex largest term."""
        if not self.terms:
            return None
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def iter_sorted(self):
        for e in sorted(self.terms, key=grlex_key):
            yield e, self.terms[e]

    # -- arithmetic -------------------------------------------------------

    def _check_vars(self, other: "LaurentPoly"):
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)) or not isinstance(other, LaurentPoly):
            try:
                other = LaurentPoly.constant(self.vars, other)
            except TypeError:
                return NotImplemented
        self._check_vars(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            c2 = terms.get(e, 0) + c
            if c2:
                terms[e] = c2
            else:
                terms.pop(e, None)
        out = LaurentPoly(self.vars)
        out.terms = terms
        return out

    __radd__ = __add__

    def __neg__(self):
        out = LaurentPoly(self.vars)
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            try:
                other = LaurentPoly.constant(self.vars, other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            try:
                c = as_exact(other)
            except TypeError:
                return NotImplemented
            out = LaurentPoly(self.vars)
            if c:
                out.terms = {e: cc * c for e, cc in self.terms.items()}
            return out
        self._check_vars(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = terms.get(e, 0) + c1 * c2
                if c:
                    terms[e] = c
                else:
                    terms.pop(e, None)
        out = LaurentPoly(self.vars)
        out.terms = terms
        return out

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a scalar or by a monomial polynomial."""
        if isinstance(other, LaurentPoly):
            if not other.terms:
                raise DivisionByZero("division by zero polynomial")
            if not other.is_monomial():
                raise ValueError("LaurentPoly division only by monomials; use RatFunc")
            (e0, c0), = other.terms.items()
            inv = scalar_inv(c0)
            out = LaurentPoly(self.vars)
            out.terms = {
                tuple(a - b for a, b in zip(e, e0)): c * inv for e, c in self.terms.items()
            }
            return out
        inv = scalar_inv(as_exact(other))
        return self * inv

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        out = LaurentPoly.constant(self.vars, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def map_coefficients(self, fn) -> "LaurentPoly":
        out = LaurentPoly(self.vars)
        out.terms = {e: v for e, c in self.terms.items() if (v := fn(c))}
        return out

    # -- evaluation and substitution ---------------------------------------

    def eval(self, point: Sequence[object]):
        """Exact value at a point; raises PoleAtPoint on 0**negative."""
        if len(point) != len(self.vars):
            raise ValueError("point dimension mismatch")
        pt = [as_exact(p) for p in point]
        total = None
        for e, c in self.terms.items():
            term = c
            for p, a in zip(pt, e):
                if a == 0:
                    continue
                if not p:
                    if a < 0:
                        raise PoleAtPoint("negative power of zero coordinate")
                    term = term * 0
                    break
                term = term * (p ** a if a > 0 else scalar_inv(p) ** (-a))
            total = term if total is None else total + term
        return total if total is not None else Fraction(0)

    def eval_partial(self, assignment: Mapping[str, object]) -> "LaurentPoly":
        """Substitute scalar values for a subset of the variables."""
        keep = [i for i, v in enumerate(self.vars) if v not in assignment]
        vals = {i: as_exact(assignment[v]) for i, v in enumerate(self.vars) if v in assignment}
        out_terms: dict = {}
        for e, c in self.terms.items():
            coef = c
            for i, val in vals.items():
                a = e[i]
                if a == 0:
                    continue
                if not val:
                    if a < 0:
                        raise PoleAtPoint("negative power of zero coordinate")
                    coef = 0
                    break
                coef = coef * (val ** a if a > 0 else scalar_inv(val) ** (-a))
            if not coef:
                continue
            ekeep = tuple(e[i] for i in keep)
            c2 = out_terms.get(ekeep, 0) + coef
            if c2:
                out_terms[ekeep] = c2
            else:
                out_terms.pop(ekeep, None)
        out = LaurentPoly([self.vars[i] for i in keep])
        out.terms = out_terms
        return out

    def derivative(self, name: str) -> "LaurentPoly":
        i = self.vars.index(name)
        terms: dict = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            e2 = list(e)
            e2[i] -= 1
            terms[tuple(e2)] = c * e[i]
        out = LaurentPoly(self.vars)
        out.terms = terms
        return out

    def compose(self, images: Sequence["RatFunc"]) -> "RatFunc":
        """Substitute each variable by a rational function (same var set)."""
        if len(images) != len(self.vars):
            raise ValueError("one image per variable required")
        images = [im if isinstance(im, RatFunc) else RatFunc.from_poly(im) for im in images]
        tvars = images[0].num.vars
        total = RatFunc.from_poly(LaurentPoly.zero(tvars))
        for e, c in self.terms.items():
            term = RatFunc.from_poly(LaurentPoly.constant(tvars, c))
            for im, a in zip(images, e):
                if a:
                    term = term * (im ** a)
            total = total + term
        return total

    def try_divide(self, divisor: "LaurentPoly"):
        """Exact quotient self / divisor, or None when not divisible.

        Graded-lex single-divisor division; sound for exactness because
        leading terms are multiplicative in that order.
        """
        self._check_vars(divisor)
        if not divisor:
            raise DivisionByZero("division by zero polynomial")
        if divisor.is_monomial():
            return self / divisor
        # shift both to true polynomials
        smin = self.min_exponents()
        dmin = divisor.min_exponents()
        rem = self / LaurentPoly.monomial(self.vars, smin)
        div = divisor / LaurentPoly.monomial(self.vars, dmin)
        dlead, dcoef = div.leading_term()
        dinv = scalar_inv(dcoef)
        quot_terms: dict = {}
        while rem:
            rlead, rcoef = rem.leading_term()
            qe = tuple(a - b for a, b in zip(rlead, dlead))
            if any(x < 0 for x in qe):
                return None
            qc = rcoef * dinv
            quot_terms[qe] = qc
            rem = rem - LaurentPoly.monomial(self.vars, qe, qc) * div
        quot = LaurentPoly(self.vars, quot_terms)
        shift = tuple(a - b for a, b in zip(smin, dmin))
        return quot * LaurentPoly.monomial(self.vars, shift)

    def rename(self, variables) -> "LaurentPoly":
        if len(variables) != len(self.vars):
            raise ValueError("variable count mismatch")
        out = LaurentPoly(variables)
        out.terms = dict(self.terms)
        return out

    def embed(self, variables) -> "LaurentPoly":
        """View in a larger variable tuple (missing exponents zero)."""
        variables = tuple(variables)
        pos = [variables.index(v) for v in self.vars]
        out_terms = {}
        for e, c in self.terms.items():
            e2 = [0] * len(variables)
            for p, a in zip(pos, e):
                e2[p] = a
            out_terms[tuple(e2)] = c
        out = LaurentPoly(variables)
        out.terms = out_terms
        return out

    # -- serialization ------------------------------------------------------

    def serialize(self) -> str:
        """One `coef e1 ... ed` line per term, graded-lex order."""
        lines = []
        for e, c in self.iter_sorted():
            lines.append(" ".join([serialize_scalar_monomial(c), *map(str, e)]))
        return "\n".join(lines)

    @classmethod
    def parse(cls, text: str, variables) -> "LaurentPoly":
        terms: dict = {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != len(tuple(variables)) + 1:
                raise ParseError(f"term line has wrong arity: {raw!r}")
            coef = parse_scalar(parts[0])
            try:
                e = tuple(int(p) for p in parts[1:])
            except ValueError as exc:
                raise ParseError(f"bad exponent in {raw!r}") from exc
            if e in terms:
                raise ParseError(f"duplicate exponent vector in {raw!r}")
            terms[e] = coef
        return cls(variables, terms)

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for e, c in self.iter_sorted():
            mono = "*".join(
                f"{v}^{a}" if a != 1 else v for v, a in zip(self.vars, e) if a
            )
            cs = str(c) if not isinstance(c, Fraction) else (
                str(c) if c.denominator != 1 else str(c.numerator)
            )
            bits.append(f"{cs}*{mono}" if mono else cs)
        return " + ".join(bits)

    def __repr__(self):
        return f"LaurentPoly({self.vars}, {self.__str__()})"


class RatFunc:
    """Canonical ratio of Laurent polynomials.

    Canonical form: the common monomial content of numerator and
    denominator is removed (per-variable minimum exponent over the pair is
    zero) and the graded-lex leading coefficient of the denominator is 1.
    Equality is decided by cross-multiplication.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly):
        if num.vars != den.vars:
            raise ValueError("numerator/denominator variable mismatch")
        if not den:
            raise DivisionByZero("zero denominator")
        num, den = self._canonicalize(num, den)
        self.num = num
        self.den = den

    @staticmethod
    def _canonicalize(num, den):
        nvars = len(num.vars)
        if num.terms and not den.is_monomial():
            quot = num.try_divide(den)
            if quot is not None:
                num = quot
                den = LaurentPoly.constant(num.vars, 1)
        if num.terms:
            nmin = num.min_exponents()
            dmin = den.min_exponents()
            shift = tuple(min(a, b) for a, b in zip(nmin, dmin))
        else:
            shift = den.min_exponents()
        if any(shift):
            mono = LaurentPoly.monomial(num.vars, shift)
            num = num / mono
            den = den / mono
        lead = den.leading_term()
        inv = scalar_inv(lead[1])
        if not (isinstance(inv, Fraction) and inv == 1):
            num = num * inv
            den = den * inv
        return num, den

    @classmethod
    def from_poly(cls, p: LaurentPoly) -> "RatFunc":
        return cls(p, LaurentPoly.constant(p.vars, 1))

    @classmethod
    def variable(cls, variables, name) -> "RatFunc":
        return cls.from_poly(LaurentPoly.variable(variables, name))

    @property
    def vars(self):
        return self.num.vars

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            other = RatFunc.from_poly(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        if not isinstance(other, RatFunc):
            if isinstance(other, LaurentPoly):
                other = RatFunc.from_poly(other)
            else:
                try:
                    other = RatFunc.from_poly(LaurentPoly.constant(self.vars, other))
                except TypeError:
                    return NotImplemented
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        out = RatFunc.__new__(RatFunc)
        out.num = -self.num
        out.den = self.den
        return out

    def __sub__(self, other):
        if isinstance(other, (LaurentPoly, int, Fraction)):
            return self + (-(other if isinstance(other, LaurentPoly) else LaurentPoly.constant(self.vars, other)))
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, RatFunc):
            if isinstance(other, LaurentPoly):
                other = RatFunc.from_poly(other)
            else:
                try:
                    other = RatFunc.from_poly(LaurentPoly.constant(self.vars, other))
                except TypeError:
                    return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, RatFunc):
            if isinstance(other, LaurentPoly):
                other = RatFunc.from_poly(other)
            else:
                try:
                    other = RatFunc.from_poly(LaurentPoly.constant(self.vars, other))
                except TypeError:
                    return NotImplemented
        if not other.num:
            raise DivisionByZero("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self.inverse() * other

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise DivisionByZero("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = RatFunc.from_poly(LaurentPoly.constant(self.vars, 1))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def compose(self, images: Sequence["RatFunc"]) -> "RatFunc":
        """Substitute variables by rational functions, canonicalized."""
        num = self.num.compose(images)
        den = self.den.compose(images)
        if not den.num:
            raise DivisionByZero("denominator collapses to zero under composition")
        return num / den

    def eval(self, point):
        dv = self.den.eval(point)
        if not dv:
            raise PoleAtPoint("denominator vanishes at the point")
        return self.num.eval(point) * scalar_inv(dv)

    def is_laurent_polynomial(self) -> bool:
        return self.den.is_monomial()

    def as_laurent(self) -> LaurentPoly:
        if not self.is_laurent_polynomial():
            raise ValueError("denominator is not a monomial")
        return self.num / self.den

    def laurent_expansion(self, lo: Exponents, hi: Exponents) -> LaurentPoly:
        """Coefficients of the expansion around the origin on an exponent box.

        The denominator (content removed) must have a nonzero term at its
        per-variable exponent minimum ("constant corner"); the inverse is
        then the multivariate geometric series, truncated to exponents
        within [lo, hi] per variable.
        """
        nvars = len(self.vars)
        dmin = self.den.min_exponents()
        shift = LaurentPoly.monomial(self.vars, dmin)
        dd = self.den / shift
        c0 = dd.constant_term()
        if not c0:
            raise ValueError(
                "denominator has no constant corner; iterated expansion unsupported"
            )
        # effective box for the power-series inverse of dd
        num = self.num / shift
        nmin = num.min_exponents()
        cap = tuple(hi[i] - nmin[i] for i in range(nvars))
        width = sum(max(0, c) for c in cap) + 1
        u = (LaurentPoly.constant(self.vars, 1) - dd / c0)
        inv = LaurentPoly.constant(self.vars, 1)
        term = LaurentPoly.constant(self.vars, 1)
        for _ in range(width):
            term = _box_truncate(term * u, cap)
            if not term:
                break
            inv = inv + term
        inv = inv / c0
        full = num * inv
        out_terms = {
            e: c
            for e, c in full.terms.items()
            if all(lo[i] <= e[i] <= hi[i] for i in range(nvars))
        }
        out = LaurentPoly(self.vars)
        out.terms = out_terms
        return out

    def serialize(self) -> str:
        return "num:\n" + self.num.serialize() + "\nden:\n" + self.den.serialize()

    @classmethod
    def parse(cls, text: str, variables) -> "RatFunc":
        num_lines: list[str] = []
        den_lines: list[str] = []
        target = None
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line == "num:":
                target = num_lines
            elif line == "den:":
                target = den_lines
            elif target is None:
                raise ParseError("numerator file must start with a num: section")
            else:
                target.append(line)
        if not den_lines:
            den_lines = []
        num = LaurentPoly.parse("\n".join(num_lines), variables)
        den = (
            LaurentPoly.parse("\n".join(den_lines), variables)
            if den_lines
            else LaurentPoly.constant(variables, 1)
        )
        return cls(num, den)

    def __str__(self):
        if self.den.is_constant() and self.den.constant_term() == 1:
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self):
        return f"RatFunc({self})"


def _box_truncate(p: LaurentPoly, cap: Exponents) -> LaurentPoly:
    out = LaurentPoly(p.vars)
    out.terms = {
        e: c for e, c in p.terms.items() if all(x <= m for x, m in zip(e, cap))
    }
    return out
