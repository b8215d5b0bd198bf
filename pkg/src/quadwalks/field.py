"""Exact scalar arithmetic.

Scalars flowing through the engine are, in increasing order of generality:

* ``int`` / ``fractions.Fraction`` -- exact rationals (the fast path),
* :class:`Rad` -- real elements of radical extensions, canonically written
  as rational combinations of products of prime powers ``p**e`` with
  fractional exponents (covers saddle coordinates such as ``sqrt(3)`` or
  ``2**(3/4)``),
* :class:`Ball` -- certified intervals (mpmath), used when a saddle point
  has no supported closed form,
* :class:`ComplexExact` -- pairs of the above, for root-of-unity twists,
* :class:`ScaledCoefficient` -- an exact value times an explicit power of
  pi, the shape of every asymptotic-coefficient entry.

All exact types have decidable equality because their representations are
canonical.  Mixed arithmetic coerces upwards (rational -> Rad; anything
exact -> Ball only when a Ball is already involved).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Union

import mpmath

from .errors import (
    DivisionByZero,
    InexactSqrt,
    ParseError,
    PrecisionInsufficient,
    UnsupportedRootOrder,
)

Rational = Union[int, Fraction]

_MAX_RADICAL_GROUP = 4096


class _IvDps:
    """Context manager setting the interval context's decimal precision."""

    def __init__(self, dps):
        self.dps = dps
        self.saved = None

    def __enter__(self):
        self.saved = mpmath.iv.dps
        mpmath.iv.dps = self.dps
        return mpmath.iv

    def __exit__(self, *exc):
        mpmath.iv.dps = self.saved
        return False


def iv_workdps(dps):
    return _IvDps(dps)


def _solve_exact(mat, rhs):
    """Solve a square rational system by Gaussian elimination; None if singular."""
    n = len(rhs)
    m = [list(row) + [rhs[i]] for i, row in enumerate(mat)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        inv = Fraction(1) / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [m[i][n] for i in range(n)]


def _factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (inputs here are small)."""
    if n <= 0:
        raise ValueError("can only factor positive integers")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected a rational, got {type(x).__name__}")


class Rad:
    """Element of the field generated over Q by real radicals of rationals.

    Internal form: a sorted tuple of ``(key, coeff)`` pairs, where ``key``
    is a sorted tuple of ``(prime, exponent)`` with exponents in (0, 1).
    Distinct products of prime radicals are linearly independent over Q,
    so the representation is unique and equality/zero tests are exact.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms):
        # terms: mapping key -> Fraction; zero coefficients dropped.
        cleaned = tuple(sorted((k, c) for k, c in terms.items() if c))
        self._terms = cleaned

    # -- constructors -------------------------------------------------

    @classmethod
    def from_rational(cls, q: Rational) -> "Rad":
        q = _frac(q)
        return cls({(): q} if q else {})

    @classmethod
    def root(cls, base: Rational, index: int) -> "Rad":
        """Exact ``base**(1/index)`` for a positive rational base."""
        base = _frac(base)
        if base <= 0:
            raise InexactSqrt("radicals of non-positive rationals are not real")
        if index <= 0:
            raise ValueError("root index must be positive")
        return cls._from_prime_powers(
            {p: Fraction(e, index) for p, e in _factorize(base.numerator).items()},
            Fraction(1),
        ) * cls._from_prime_powers(
            {p: Fraction(-e, index) for p, e in _factorize(base.denominator).items()},
            Fraction(1),
        )

    @classmethod
    def _from_prime_powers(cls, powers: dict[int, Fraction], coeff: Fraction) -> "Rad":
        """Canonicalize prod p**e (e any rational) times coeff."""
        key = {}
        for p, e in powers.items():
            if not e:
                continue
            whole = e.numerator // e.denominator
            fracpart = e - whole
            coeff *= Fraction(p) ** whole
            if fracpart:
                key[p] = fracpart
        return cls({tuple(sorted(key.items())): coeff})

    # -- helpers -------------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, Rad):
            return x
        if isinstance(x, (int, Fraction)):
            return Rad.from_rational(x)
        return None

    @staticmethod
    def _mul_keys(k1, k2):
        """Multiply two monomial keys; returns (key, rational spill factor)."""
        powers = dict(k1)
        spill = Fraction(1)
        for p, e in k2:
            e2 = powers.get(p, Fraction(0)) + e
            if e2 >= 1:
                e2 -= 1
                spill *= p
            if e2:
                powers[p] = e2
            else:
                powers.pop(p, None)
        return tuple(sorted(powers.items())), spill

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        other = Rad._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for k, c in other._terms:
            c2 = terms.get(k, Fraction(0)) + c
            if c2:
                terms[k] = c2
            else:
                terms.pop(k, None)
        return Rad(terms)

    __radd__ = __add__

    def __neg__(self):
        return Rad({k: -c for k, c in self._terms})

    def __sub__(self, other):
        other = Rad._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = Rad._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = Rad._coerce(other)
        if other is None:
            return NotImplemented
        terms: dict = {}
        for k1, c1 in self._terms:
            for k2, c2 in other._terms:
                k, spill = Rad._mul_keys(k1, k2)
                c = terms.get(k, Fraction(0)) + c1 * c2 * spill
                if c:
                    terms[k] = c
                else:
                    terms.pop(k, None)
        return Rad(terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = Rad.from_rational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self) -> "Rad":
        """Exact multiplicative inverse (field element)."""
        if not self._terms:
            raise DivisionByZero("inverse of zero")
        if len(self._terms) == 1:
            (key, c), = self._terms
            powers = {p: -e for p, e in key}
            return Rad._from_prime_powers(powers, Fraction(1)) * Rad.from_rational(1 / c)
        # Span of the finite monomial group generated by the keys is a
        # finite-dimensional Q-algebra that is a domain, hence a field;
        # invert the multiplication-by-self matrix.
        basis = self._monomial_group()
        index = {k: i for i, k in enumerate(basis)}
        n = len(basis)
        # column j: self * basis[j]
        mat = [[Fraction(0)] * n for _ in range(n)]
        for j, bk in enumerate(basis):
            for k1, c1 in self._terms:
                k, spill = Rad._mul_keys(k1, bk)
                mat[index[k]][j] += c1 * spill
        rhs = [Fraction(0)] * n
        rhs[index[()]] = Fraction(1)
        sol = _solve_exact(mat, rhs)
        if sol is None:
            raise DivisionByZero("radical element is not invertible (internal)")
        return Rad({basis[i]: sol[i] for i in range(n)})

    def _monomial_group(self):
        """All products of the monomials of self (finite abelian group)."""
        seen = {()}
        frontier = [()]
        gens = [k for k, _ in self._terms if k]
        while frontier:
            new = []
            for k in frontier:
                for g in gens:
                    k2, _ = Rad._mul_keys(k, g)
                    if k2 not in seen:
                        if len(seen) >= _MAX_RADICAL_GROUP:
                            raise InexactSqrt("radical tower too large to invert")
                        seen.add(k2)
                        new.append(k2)
            frontier = new
        return sorted(seen)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero")
            return self * Rad.from_rational(Fraction(1) / _frac(other))
        if isinstance(other, Rad):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        other = Rad._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    # -- predicates and conversions -------------------------------------

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        other = Rad._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self.is_rational():
            return hash(self.as_fraction())
        return hash(self._terms)

    @property
    def terms(self):
        return self._terms

    def is_rational(self) -> bool:
        return all(k == () for k, _ in self._terms)

    def as_fraction(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self._terms[0][1]

    def is_monomial(self) -> bool:
        return len(self._terms) <= 1

    def sqrt(self) -> "Rad":
        """Exact square root; stays in the class only for single monomials."""
        if not self._terms:
            return Rad.from_rational(0)
        if len(self._terms) > 1:
            raise InexactSqrt("square root of a multi-term radical sum")
        (key, c), = self._terms
        if c < 0:
            raise InexactSqrt("square root of a negative element")
        powers = {p: e / 2 for p, e in key}
        for p, e in _factorize(c.numerator).items():
            powers[p] = powers.get(p, Fraction(0)) + Fraction(e, 2)
        for p, e in _factorize(c.denominator).items():
            powers[p] = powers.get(p, Fraction(0)) - Fraction(e, 2)
        return Rad._from_prime_powers(powers, Fraction(1))

    def sign(self) -> int:
        """Exact sign (-1, 0, 1); refines interval precision until decided."""
        if not self._terms:
            return 0
        if len(self._terms) == 1:
            return 1 if self._terms[0][1] > 0 else -1
        for dps in (30, 60, 120, 240, 480):
            iv = self.interval(dps)
            if iv.a > 0:
                return 1
            if iv.b < 0:
                return -1
        raise PrecisionInsufficient(f"cannot determine sign of {self!r}")

    def interval(self, dps: int = 30):
        """Certified mpmath interval enclosing the value."""
        with iv_workdps(dps):
            total = mpmath.iv.mpf(0)
            for key, c in self._terms:
                term = mpmath.iv.mpf(c.numerator) / mpmath.iv.mpf(c.denominator)
                for p, e in key:
                    r = mpmath.iv.mpf(e.numerator) / mpmath.iv.mpf(e.denominator)
                    term *= mpmath.iv.exp(r * mpmath.iv.log(mpmath.iv.mpf(p)))
                total += term
            return total

    def numeric(self, dps: int = 30):
        with mpmath.workdps(dps):
            return sum(
                mpmath.mpf(c.numerator) / c.denominator
                * mpmath.fprod([mpmath.power(p, mpmath.mpf(e.numerator) / e.denominator) for p, e in key])
                for key, c in self._terms
            )

    def __lt__(self, other):
        other = Rad._coerce(other)
        if other is None:
            return NotImplemented
        return (self - other).sign() < 0

    def __le__(self, other):
        other = Rad._coerce(other)
        if other is None:
            return NotImplemented
        return (self - other).sign() <= 0

    def __gt__(self, other):
        other = Rad._coerce(other)
        if other is None:
            return NotImplemented
        return (self - other).sign() > 0

    def __ge__(self, other):
        other = Rad._coerce(other)
        if other is None:
            return NotImplemented
        return (self - other).sign() >= 0

    def __repr__(self):
        return f"Rad({serialize_scalar(self)})"

    def __str__(self):
        return serialize_scalar(self)


def rad_sqrt(x):
    """Square root across scalar types (rational result when possible)."""
    if isinstance(x, (int, Fraction)):
        q = _frac(x)
        if q < 0:
            raise InexactSqrt("square root of a negative rational")
        if q == 0:
            return Fraction(0)
        rn = _isqrt_exact(q.numerator)
        rd = _isqrt_exact(q.denominator)
        if rn is not None and rd is not None:
            return Fraction(rn, rd)
        return Rad.from_rational(q).sqrt()
    if isinstance(x, Rad):
        return x.sqrt()
    if isinstance(x, Ball):
        return x.sqrt()
    raise TypeError(f"cannot take sqrt of {type(x).__name__}")


def _isqrt_exact(n: int):
    r = int(n ** 0.5)
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand * cand == n:
            return cand
    return None


class Ball:
    """Certified real interval (wraps ``mpmath.iv.mpf``).

    The error radius only grows under arithmetic; mpmath's interval type
    guarantees outward rounding.
    """

    __slots__ = ("iv",)

    def __init__(self, iv_value):
        self.iv = iv_value

    @classmethod
    def from_scalar(cls, x, dps: int = 30) -> "Ball":
        if isinstance(x, Ball):
            return x
        if isinstance(x, (int, Fraction)):
            q = _frac(x)
            with iv_workdps(dps):
                return cls(mpmath.iv.mpf(q.numerator) / mpmath.iv.mpf(q.denominator))
        if isinstance(x, Rad):
            return cls(x.interval(dps))
        raise TypeError(f"cannot make a Ball from {type(x).__name__}")

    @staticmethod
    def _coerce(x):
        if isinstance(x, Ball):
            return x
        if isinstance(x, (int, Fraction, Rad)):
            return Ball.from_scalar(x)
        return None

    def __add__(self, other):
        other = Ball._coerce(other)
        if other is None:
            return NotImplemented
        return Ball(self.iv + other.iv)

    __radd__ = __add__

    def __neg__(self):
        return Ball(-self.iv)

    def __sub__(self, other):
        other = Ball._coerce(other)
        if other is None:
            return NotImplemented
        return Ball(self.iv - other.iv)

    def __rsub__(self, other):
        other = Ball._coerce(other)
        if other is None:
            return NotImplemented
        return Ball(other.iv - self.iv)

    def __mul__(self, other):
        other = Ball._coerce(other)
        if other is None:
            return NotImplemented
        return Ball(self.iv * other.iv)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Ball._coerce(other)
        if other is None:
            return NotImplemented
        if 0 in other.iv:
            raise DivisionByZero("division by an interval containing zero")
        return Ball(self.iv / other.iv)

    def __rtruediv__(self, other):
        other = Ball._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return 1 / (self ** (-n))
        out = Ball.from_scalar(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def sqrt(self):
        return Ball(mpmath.iv.sqrt(self.iv))

    def contains_zero(self) -> bool:
        return 0 in self.iv

    def sign(self) -> int:
        if self.iv.a > 0:
            return 1
        if self.iv.b < 0:
            return -1
        raise PrecisionInsufficient("interval sign undecided (contains zero)")

    def __bool__(self):
        # "definitely nonzero"; an interval straddling zero is not usable
        # as a nonzero coefficient.
        return not self.contains_zero()

    def __eq__(self, other):
        other = Ball._coerce(other)
        if other is None:
            return NotImplemented
        return self.iv == other.iv

    def __hash__(self):
        return hash(("Ball", str(self.iv)))

    @property
    def mid(self):
        return self.iv.mid

    @property
    def rad(self):
        return self.iv.delta / 2

    def numeric(self, dps: int = 30):
        return mpmath.mpf(self.iv.mid)

    def __repr__(self):
        return f"Ball({self.iv})"


@dataclass(frozen=True)
class ComplexExact:
    """Complex number with exact real/imaginary parts (rational or Rad)."""

    re: object
    im: object

    @staticmethod
    def _coerce(x):
        if isinstance(x, ComplexExact):
            return x
        if isinstance(x, (int, Fraction, Rad)):
            return ComplexExact(x, Fraction(0))
        return None

    def __add__(self, other):
        other = ComplexExact._coerce(other)
        if other is None:
            return NotImplemented
        return ComplexExact(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return ComplexExact(-self.re, -self.im)

    def __sub__(self, other):
        other = ComplexExact._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = ComplexExact._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = ComplexExact._coerce(other)
        if other is None:
            return NotImplemented
        return ComplexExact(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conjugate(self):
        return ComplexExact(self.re, -self.im)

    def __truediv__(self, other):
        other = ComplexExact._coerce(other)
        if other is None:
            return NotImplemented
        n2 = other.re * other.re + other.im * other.im
        if not n2:
            raise DivisionByZero("complex division by zero")
        inv = scalar_inv(n2)
        num = self * other.conjugate()
        return ComplexExact(num.re * inv, num.im * inv)

    def __rtruediv__(self, other):
        other = ComplexExact._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return 1 / (self ** (-n))
        out = ComplexExact(Fraction(1), Fraction(0))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        other = ComplexExact._coerce(other)
        if other is None:
            return NotImplemented
        return scalar_eq(self.re, other.re) and scalar_eq(self.im, other.im)

    def __hash__(self):
        return hash((self.re, self.im))

    def is_real(self) -> bool:
        return not self.im

    def numeric(self, dps: int = 30):
        return mpmath.mpc(scalar_numeric(self.re, dps), scalar_numeric(self.im, dps))


# exact cos/sin of 2*pi*a/b for the denominators occurring in twist groups
_HALF = Fraction(1, 2)


def _cos_sin_2pi(num: int, den: int):
    sqrt2_2 = Rad.root(2, 2) / 2
    sqrt3_2 = Rad.root(3, 2) / 2
    table = {
        (0, 1): (Fraction(1), Fraction(0)),
        (1, 2): (Fraction(-1), Fraction(0)),
        (1, 3): (-_HALF, sqrt3_2),
        (2, 3): (-_HALF, -sqrt3_2),
        (1, 4): (Fraction(0), Fraction(1)),
        (3, 4): (Fraction(0), Fraction(-1)),
        (1, 6): (_HALF, sqrt3_2),
        (5, 6): (_HALF, -sqrt3_2),
        (1, 8): (sqrt2_2, sqrt2_2),
        (3, 8): (-sqrt2_2, sqrt2_2),
        (5, 8): (-sqrt2_2, -sqrt2_2),
        (7, 8): (sqrt2_2, -sqrt2_2),
        (1, 12): (sqrt3_2, _HALF),
        (5, 12): (-sqrt3_2, _HALF),
        (7, 12): (-sqrt3_2, -_HALF),
        (11, 12): (sqrt3_2, -_HALF),
    }
    try:
        return table[(num, den)]
    except KeyError:
        raise UnsupportedRootOrder(
            f"no exact radical form for exp(2*pi*i*{num}/{den})"
        ) from None


@dataclass(frozen=True)
class RootOfUnity:
    """exp(2*pi*i * num/den) with 0 <= num < den and gcd(num, den) = 1."""

    num: int = 0
    den: int = 1

    def __post_init__(self):
        if self.den <= 0:
            raise ValueError("denominator must be positive")
        if not (0 <= self.num < self.den) or gcd(self.num, self.den) != 1:
            raise ValueError("exponent must be reduced with 0 <= num < den")

    @classmethod
    def from_fraction(cls, q: Fraction) -> "RootOfUnity":
        q = _frac(q)
        q = q - (q.numerator // q.denominator)  # reduce mod 1
        return cls(q.numerator, q.denominator)

    @property
    def exponent(self) -> Fraction:
        return Fraction(self.num, self.den)

    @property
    def order(self) -> int:
        return self.den

    def is_one(self) -> bool:
        return self.den == 1

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        if not isinstance(other, RootOfUnity):
            return NotImplemented
        return RootOfUnity.from_fraction(self.exponent + other.exponent)

    def __pow__(self, n: int) -> "RootOfUnity":
        return RootOfUnity.from_fraction(self.exponent * n)

    def inverse(self) -> "RootOfUnity":
        return RootOfUnity.from_fraction(-self.exponent)

    def conjugate(self) -> "RootOfUnity":
        return self.inverse()

    def as_complex(self) -> ComplexExact:
        cos, sin = _cos_sin_2pi(self.num, self.den)
        return ComplexExact(cos, sin)

    def numeric(self, dps: int = 30):
        with mpmath.workdps(dps):
            return mpmath.expjpi(2 * mpmath.mpf(self.num) / self.den)

    def __str__(self):
        if self.den == 1:
            return "1"
        if self.den == 2:
            return "-1"
        return f"zeta({self.num}/{self.den})"


PI_POWER_ZERO = Fraction(0)


@dataclass(frozen=True)
class ScaledCoefficient:
    """Exact value times an explicit (half-integer) power of pi."""

    value: object
    pi_power: Fraction = PI_POWER_ZERO

    def __post_init__(self):
        if isinstance(self.value, int):
            object.__setattr__(self, "value", Fraction(self.value))
        object.__setattr__(self, "pi_power", _frac(self.pi_power))
        if not self.value:
            object.__setattr__(self, "pi_power", PI_POWER_ZERO)

    @staticmethod
    def _coerce(x):
        if isinstance(x, ScaledCoefficient):
            return x
        if isinstance(x, (int, Fraction, Rad, Ball)):
            return ScaledCoefficient(x)
        return None

    def __add__(self, other):
        other = ScaledCoefficient._coerce(other)
        if other is None:
            return NotImplemented
        if not self.value:
            return other
        if not other.value:
            return self
        if self.pi_power != other.pi_power:
            raise ValueError("cannot add coefficients with different pi powers")
        return ScaledCoefficient(self.value + other.value, self.pi_power)

    __radd__ = __add__

    def __neg__(self):
        return ScaledCoefficient(-self.value, self.pi_power)

    def __sub__(self, other):
        other = ScaledCoefficient._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = ScaledCoefficient._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = ScaledCoefficient._coerce(other)
        if other is None:
            return NotImplemented
        return ScaledCoefficient(self.value * other.value, self.pi_power + other.pi_power)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = ScaledCoefficient._coerce(other)
        if other is None:
            return NotImplemented
        return ScaledCoefficient(self.value * scalar_inv(other.value), self.pi_power - other.pi_power)

    def __rtruediv__(self, other):
        other = ScaledCoefficient._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __bool__(self):
        return bool(self.value)

    def __eq__(self, other):
        other = ScaledCoefficient._coerce(other)
        if other is None:
            return NotImplemented
        return self.pi_power == other.pi_power and scalar_eq(self.value, other.value)

    def __hash__(self):
        return hash((self.value, self.pi_power))

    def numeric(self, dps: int = 30):
        with mpmath.workdps(dps):
            return scalar_numeric(self.value, dps) * mpmath.pi ** mpmath.mpf(
                f"{self.pi_power.numerator}/{self.pi_power.denominator}"
            )

    def __str__(self):
        return serialize_scalar(self)

    def __repr__(self):
        return f"ScaledCoefficient({serialize_scalar(self)})"


# ----------------------------------------------------------------------
# generic scalar helpers


def scalar_eq(a, b) -> bool:
    r = a == b
    if r is NotImplemented:
        return False
    return bool(r)


def scalar_inv(x):
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, Fraction):
        if not x:
            raise DivisionByZero("inverse of zero")
        return Fraction(1) / x
    if isinstance(x, (Rad, ScaledCoefficient)):
        return 1 / x
    if isinstance(x, Ball):
        return 1 / x
    if isinstance(x, ComplexExact):
        return 1 / x
    raise TypeError(f"cannot invert {type(x).__name__}")


def scalar_sign(x) -> int:
    if isinstance(x, int):
        return (x > 0) - (x < 0)
    if isinstance(x, Fraction):
        return (x > 0) - (x < 0)
    if isinstance(x, (Rad, Ball)):
        return x.sign()
    if isinstance(x, ScaledCoefficient):
        return scalar_sign(x.value)
    raise TypeError(f"no sign for {type(x).__name__}")


def scalar_numeric(x, dps: int = 30):
    with mpmath.workdps(dps):
        if isinstance(x, int):
            return mpmath.mpf(x)
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        if isinstance(x, (Rad, Ball, ScaledCoefficient, ComplexExact)):
            return x.numeric(dps)
    raise TypeError(f"no numeric value for {type(x).__name__}")


def as_exact(x):
    """Normalize ints to Fractions; pass exact types through."""
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (Fraction, Rad, Ball, ComplexExact, ScaledCoefficient)):
        return x
    raise TypeError(f"{type(x).__name__} is not a supported scalar")


def simplify_scalar(x):
    """Collapse a Rad that happens to be rational back to a Fraction."""
    if isinstance(x, Rad) and x.is_rational():
        return x.as_fraction()
    if isinstance(x, ComplexExact) and x.is_real():
        return simplify_scalar(x.re)
    return x


# ----------------------------------------------------------------------
# serialization: `p/q` with optional `*rad(r,p/q)` and `*pi^(r)` factors,
# multi-term sums joined by ` + ` / ` - `.


def _serialize_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _serialize_rad_term(key, coeff: Fraction, pi_power: Fraction) -> str:
    parts = [_serialize_fraction(coeff)]
    for p, e in key:
        parts.append(f"rad({p},{_serialize_fraction(e)})")
    if pi_power:
        parts.append(f"pi^({_serialize_fraction(pi_power)})")
    return "*".join(parts)


def serialize_scalar(x) -> str:
    """Deterministic exact text form of a scalar."""
    x = as_exact(x)
    pi_power = PI_POWER_ZERO
    if isinstance(x, ScaledCoefficient):
        pi_power = x.pi_power
        x = x.value
    if isinstance(x, Fraction):
        return _serialize_rad_term((), x, pi_power)
    if isinstance(x, Rad):
        if not x.terms:
            return _serialize_rad_term((), Fraction(0), pi_power)
        out = []
        for i, (key, c) in enumerate(x.terms):
            s = _serialize_rad_term(key, abs(c), pi_power)
            if i == 0:
                out.append(s if c > 0 else "-" + s)
            else:
                out.append((" + " if c > 0 else " - ") + s)
        return "".join(out)
    if isinstance(x, Ball):
        return f"~{mpmath.nstr(mpmath.mpf(x.iv.mid), 20)}"
    raise TypeError(f"cannot serialize {type(x).__name__}")


def serialize_scalar_monomial(x) -> str:
    """Like serialize_scalar but rejects multi-term radical sums.

    Polynomial term lines carry a single `coef` token; inside the engine's
    output every coefficient is rational times one radical monomial.
    """
    x = as_exact(x)
    v = x.value if isinstance(x, ScaledCoefficient) else x
    if isinstance(v, Rad) and len(v.terms) > 1:
        raise ValueError("polynomial coefficient is not a single radical monomial")
    return serialize_scalar(x)


def _parse_fraction(tok: str) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {tok!r}") from exc


def _parse_term(term: str):
    """One product of factors: rational, rad(r,e), pi^(e)."""
    value = None
    pi_power = PI_POWER_ZERO
    for factor in term.split("*"):
        factor = factor.strip()
        if not factor:
            raise ParseError(f"empty factor in {term!r}")
        if factor.startswith("rad(") and factor.endswith(")"):
            inner = factor[4:-1]
            try:
                base_s, exp_s = inner.rsplit(",", 1)
            except ValueError as exc:
                raise ParseError(f"bad radical {factor!r}") from exc
            base = _parse_fraction(base_s)
            exp = _parse_fraction(exp_s)
            if base <= 0:
                raise ParseError(f"radical base must be positive in {factor!r}")
            radval = Rad.from_rational(base) if exp == 0 else Rad.root(base, exp.denominator) ** exp.numerator
            value = radval if value is None else value * radval
        elif factor.startswith("pi^(") and factor.endswith(")"):
            pi_power += _parse_fraction(factor[4:-1])
        elif factor == "pi":
            pi_power += 1
        else:
            q = _parse_fraction(factor)
            value = q if value is None else value * q
    if value is None:
        value = Fraction(1)
    return value, pi_power


def parse_scalar(text: str):
    """Inverse of serialize_scalar (exact forms only)."""
    text = text.strip()
    if not text:
        raise ParseError("empty scalar")
    if text.startswith("~"):
        raise ParseError("approximate scalars cannot be parsed back exactly")
    # split into signed terms at top level (no parens in the grammar)
    terms = []
    buf = ""
    sign = 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in "+-" and buf.strip() and text[i - 1] == " ":
            terms.append((sign, buf.strip()))
            sign = 1 if ch == "+" else -1
            buf = ""
        elif ch == "-" and not buf.strip():
            sign = -sign
        else:
            buf += ch
        i += 1
    if buf.strip():
        terms.append((sign, buf.strip()))
    total = None
    total_pi = None
    for sg, term in terms:
        v, pp = _parse_term(term)
        if total_pi is None:
            total_pi = pp
        elif pp != total_pi:
            raise ParseError("mixed pi powers in one scalar")
        v = v if sg > 0 else -v
        total = v if total is None else total + v
    total = simplify_scalar(total) if not isinstance(total, Fraction) else total
    if total_pi:
        return ScaledCoefficient(total, total_pi)
    return total
