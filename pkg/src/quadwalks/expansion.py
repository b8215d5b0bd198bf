"""The saddle-point expansion engine.

Pipeline: substitute x_j -> x0_j exp(i s_j / sqrt(n)) into the Cauchy
integrand S^n N / x^(k+1) y^(l+1), expand the three factors as graded
series (grading unit n^(-1/2), components in the i^g convention of
:mod:`quadwalks.series`), multiply, and integrate each even grade against
the Gaussian exp(-Q).  The first grade with a nonzero integral fixes the
polynomial decay exponent; subsequent even grades give the coefficient
functions, polynomials in the endpoint with exact pi-scaled coefficients.

The contribution of every associated saddle point equals the dominant one
times zeta^n alpha^(u-k) beta^(v-l), so twists are carried symbolically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from . import group as group_mod
from . import model as model_mod
from . import saddle as saddle_mod
from .errors import (
    DegreeBoundViolated,
    EngineInconsistency,
    NonzeroDrift,
    NumeratorSingularAtSaddle,
    ParseError,
)
from .field import (
    Ball,
    ComplexExact,
    Rad,
    RootOfUnity,
    ScaledCoefficient,
    parse_scalar,
    rad_sqrt,
    scalar_inv,
    scalar_numeric,
    scalar_sign,
    serialize_scalar,
    simplify_scalar,
)
from .laurent import LaurentPoly, RatFunc
from .model import Model
from .saddle import QForm, SaddleSystem, Twist
from .series import GradedSeries

_S_VARS = {2: ("s", "t"), 3: ("s1", "s2", "s3")}
_END_VARS = {2: ("k", "l"), 3: ("k", "l", "m")}
_START_VARS = {2: ("u", "v")}
_MAX_TRUNCATION = 64


def s_vars(dimension: int) -> tuple[str, ...]:
    return _S_VARS.get(dimension, tuple(f"s{i+1}" for i in range(dimension)))

def endpoint_vars(dimension: int) -> tuple[str, ...]:
    return _END_VARS.get(dimension, tuple(f"k{i+1}" for i in range(dimension)))

def start_vars(dimension: int) -> tuple[str, ...]:
    return _START_VARS.get(dimension, tuple(f"u{i+1}" for i in range(dimension)))


# ----------------------------------------------------------------------
# graded series of the three integrand factors


def rho_series(f: LaurentPoly, point, variables, truncation: int) -> GradedSeries:
    """Graded series of f(x0 exp(i s / sqrt n)) in the i^g convention.

    For each monomial c x^a the grade-g component is
    c * x0^a * (a . s)^g / g!; variables is the engine tuple whose first
    d entries are the s-variables.
    """
    d = len(point)
    comps: dict[int, LaurentPoly] = {}
    for e, c in f.terms.items():
        val = c
        for p, a in zip(point, e):
            if a:
                val = val * (p ** a if a > 0 else scalar_inv(p) ** (-a))
        lin = LaurentPoly(
            variables,
            {
                tuple(1 if i == j else 0 for i in range(len(variables))): Fraction(a)
                for j, a in enumerate(e[:d])
                if a
            },
        )
        power = LaurentPoly.constant(variables, 1)
        fact = 1
        for g in range(truncation + 1):
            if g:
                power = power * lin
                fact *= g
                if not power:
                    break
            contrib = power * (val * Fraction(1, fact))
            prev = comps.get(g)
            comps[g] = contrib if prev is None else prev + contrib
    return GradedSeries(variables, truncation, comps)


def expand_S_power(model: Model, system: SaddleSystem, truncation: int):
    """gamma, the local form, and the tail series exp(n B).

    Returns ``(gamma, qform, tail)`` where S(e_s)^n = gamma^n exp(-Q) *
    tail.  The grade-g tail component has polynomial parity g (mod 2);
    its Gaussian integral therefore vanishes for odd g.
    """
    d = model.dimension
    variables = s_vars(d)
    S = model_mod.step_polynomial(model)
    sser = rho_series(S, system.dominant, variables, truncation + 2)
    t_series = sser * scalar_inv(system.gamma)
    log_t = t_series.log()
    if log_t.component(1):
        raise EngineInconsistency("grade-1 of log S-series nonzero: not a critical point")
    qpoly = log_t.component(2)
    expected = _qform_poly(system.qform, variables)
    if qpoly != expected:
        raise EngineInconsistency("series grade-2 disagrees with the local form")
    b_comps = {g: p for g, p in log_t.comps.items() if g >= 3}
    n_b = GradedSeries(variables, truncation + 2, b_comps).times_n().truncate(truncation)
    tail = n_b.exp()
    _assert_parity(tail)
    return system.gamma, system.qform, tail


def _qform_poly(qform: QForm, variables) -> LaurentPoly:
    d = qform.dimension
    terms: dict = {}
    for i in range(d):
        for j in range(i, d):
            e = [0] * len(variables)
            e[i] += 1
            e[j] += 1
            coef = qform.matrix[i][j] if i == j else 2 * qform.matrix[i][j]
            if coef:
                terms[tuple(e)] = coef
    return LaurentPoly(variables, terms)


def _assert_parity(series: GradedSeries, n_svars: Optional[int] = None):
    nsv = n_svars if n_svars is not None else len(series.vars)
    for g, p in series.comps.items():
        for e in p.terms:
            if (sum(e[:nsv]) - g) % 2:
                raise EngineInconsistency("graded component violates parity")


def expand_numerator(
    numerator, model: Model, system: SaddleSystem, truncation: int
) -> GradedSeries:
    """Graded series of the numerator at the dominant saddle.

    Laurent-polynomial numerators expand termwise (components homogeneous
    of degree g); general rational numerators divide by the denominator
    series, which must have a nonzero value at the saddle.
    """
    rf = getattr(numerator, "numerator", numerator)
    if isinstance(rf, LaurentPoly):
        rf = RatFunc.from_poly(rf)
    variables = s_vars(model.dimension)
    regular, _value = saddle_mod.numerator_regular_at(system.dominant, rf)
    if not regular:
        raise NumeratorSingularAtSaddle("numerator has a pole at the dominant saddle")
    if rf.is_laurent_polynomial():
        return rho_series(rf.as_laurent(), system.dominant, variables, truncation)
    num_ser = rho_series(rf.num, system.dominant, variables, truncation)
    den_ser = rho_series(rf.den, system.dominant, variables, truncation)
    return num_ser * den_ser.inverse()


def expand_endpoint_monomial(
    dimension: int, truncation: int, variables, shifts: Sequence[int] | None = None
) -> GradedSeries:
    """Series of 1 / prod_j e_{s_j}^(k_j + shift) with symbolic endpoint.

    The saddle-coordinate prefactor x0^-(k+1) is carried separately by the
    expansion object; this is the pure exponential part
    sum_g (-(k+1)s - (l+1)t - ...)^g / g!.
    """
    if shifts is None:
        shifts = [1] * dimension
    terms: dict = {}
    nvars = len(variables)
    for j in range(dimension):
        e_s = [0] * nvars
        e_s[j] = 1
        terms[tuple(e_s)] = Fraction(-shifts[j])
        e_sk = list(e_s)
        e_sk[dimension + j] = 1
        terms[tuple(e_sk)] = Fraction(-1)
    lin = LaurentPoly(variables, terms)
    comps = {0: LaurentPoly.constant(variables, 1)}
    power = LaurentPoly.constant(variables, 1)
    fact = 1
    for g in range(1, truncation + 1):
        power = power * lin
        fact *= g
        comps[g] = power * Fraction(1, fact)
    return GradedSeries(variables, truncation, comps)


# ----------------------------------------------------------------------
# Gaussian moments

_MOMENT_CACHE: dict = {}


def _wick_moment(cov, expts):
    """E[prod x_i^a_i] for a centered Gaussian with the given covariance.

    Stein recursion: E[x_i f(x)] = sum_j cov_ij E[df/dx_j].
    """
    if sum(expts) % 2:
        return Fraction(0)
    if not any(expts):
        return Fraction(1)
    key = (cov, expts)
    hit = _MOMENT_CACHE.get(key)
    if hit is not None:
        return hit
    i = next(j for j, a in enumerate(expts) if a)
    base = list(expts)
    base[i] -= 1
    total = None
    for j, aj in enumerate(base):
        if not aj:
            continue
        rest = list(base)
        rest[j] -= 1
        term = cov[i][j] * aj * _wick_moment(cov, tuple(rest))
        total = term if total is None else total + term
    if total is None:
        total = Fraction(0)
    _MOMENT_CACHE[key] = total
    return total


def gaussian_moment(qform: QForm, exponents) -> ScaledCoefficient:
    """Exact integral of exp(-Q(s)) * prod s_j^a_j over R^d.

    Equals pi^(d/2)/sqrt(det Q) times the Wick moment with covariance
    inv(Q)/2; zero when the total degree is odd.
    """
    exponents = tuple(int(a) for a in exponents)
    if any(a < 0 for a in exponents):
        raise ValueError("moment exponents must be nonnegative")
    d = qform.dimension
    if sum(exponents) % 2:
        return ScaledCoefficient(Fraction(0))
    cov = qform.covariance()
    wick = _wick_moment(cov, exponents)
    inv_sqrt_det = scalar_inv(rad_sqrt(qform.det()))
    return ScaledCoefficient(simplify_scalar(wick * inv_sqrt_det), Fraction(d, 2))


# ----------------------------------------------------------------------
# assembled expansions


@dataclass
class AsymptoticExpansion:
    """q(A,B;n) = gamma^n/n^c [ sum_p v_p(B) T(n)/n^p + O(n^-m) ].

    ``terms[p-1]`` is v_p as a polynomial in the endpoint variables with
    ScaledCoefficient coefficients; the full coefficient function is that
    polynomial times prod_j exp_prefactor[j]^(endpoint_j).  T(n) is the
    twist sum over all associated saddle points (trivial twist included).
    """

    model: Model
    gamma: object
    c: Fraction
    pi_power: Fraction
    exp_prefactor: tuple
    terms: list[LaurentPoly]
    twists: tuple[Twist, ...]
    endpoint_variables: tuple[str, ...]
    start: tuple[int, ...]
    first_grade: int
    order: int

    def v(self, p: int) -> LaurentPoly:
        """The order-p coefficient polynomial (1-based)."""
        return self.terms[p - 1]

    @property
    def dimension(self) -> int:
        return self.model.dimension

    # -- twist bookkeeping ------------------------------------------------

    def twist_sum_exact(self, endpoint, n: int, start=None) -> ComplexExact:
        """sum_i prod_j alpha_ij^(u_j - k_j) * zeta_i^n, exactly."""
        start = tuple(start) if start is not None else self.start
        total = ComplexExact(Fraction(0), Fraction(0))
        for tw in self.twists:
            root = tw.zeta ** n
            for a, k, u in zip(tw.alphas, endpoint, start):
                root = root * (a ** (u - k))
            total = total + root.as_complex()
        return total

    def twist_sum_nonzero(self, endpoint, n: int, start=None) -> bool:
        return bool(self.twist_sum_exact(endpoint, n, start))

    # -- evaluation ---------------------------------------------------------

    def coefficient_value(self, p: int, endpoint, dps: int = 30):
        """Numeric v_p(endpoint) including the exponential prefactor."""
        with mpmath.workdps(dps):
            poly = self.v(p)
            total = mpmath.mpf(0)
            for e, c in poly.terms.items():
                term = scalar_numeric(c, dps)
                for x, a in zip(endpoint, e):
                    term *= mpmath.mpf(x) ** a
                total += term
            for base, x in zip(self.exp_prefactor, endpoint):
                total *= scalar_numeric(base, dps) ** x
            return total

    def evaluate(self, endpoint, n: int, order: Optional[int] = None, dps: int = 50):
        """Numeric truncated prediction for q(start, endpoint; n)."""
        order = self.order if order is None else min(order, self.order)
        with mpmath.workdps(dps):
            tw = self.twist_sum_exact(endpoint, n)
            tval = scalar_numeric(tw, dps)
            if abs(mpmath.im(tval)) > mpmath.mpf(10) ** (-dps // 2):
                raise EngineInconsistency("twist sum should be real")
            tval = mpmath.re(tval)
            nn = mpmath.mpf(n)
            acc = mpmath.mpf(0)
            for p in range(1, order + 1):
                acc += self.coefficient_value(p, endpoint, dps) / nn ** p
            gamma_n = scalar_numeric(self.gamma, dps) ** n
            cval = mpmath.mpf(self.c.numerator) / self.c.denominator
            return gamma_n / nn ** cval * acc * tval

    # -- serialization --------------------------------------------------------

    def serialize(self) -> str:
        lines = ["expansion"]
        if self.model.name:
            lines.append(f"model {self.model.name}")
        lines.append(f"dimension {self.dimension}")
        lines.append("start " + " ".join(map(str, self.start)))
        lines.append(f"gamma {serialize_scalar(self.gamma)}")
        lines.append(f"c {self.c}")
        lines.append(f"pi_power {self.pi_power}")
        lines.append(f"first_grade {self.first_grade}")
        lines.append(f"order {self.order}")
        lines.append("endpoint_vars " + " ".join(self.endpoint_variables))
        lines.append(
            "prefactor " + " | ".join(serialize_scalar(b) for b in self.exp_prefactor)
        )
        for tw in self.twists:
            bits = [str(a.exponent) for a in tw.alphas] + [str(tw.zeta.exponent)]
            lines.append("twist " + " ".join(bits))
        for p, poly in enumerate(self.terms, start=1):
            lines.append(f"v {p}")
            lines.extend(poly.serialize().splitlines())
        lines.append("end")
        return "\n".join(lines) + "\n"

    def __eq__(self, other):
        if not isinstance(other, AsymptoticExpansion):
            return NotImplemented
        return (
            self.dimension == other.dimension
            and self.start == other.start
            and self.gamma == other.gamma
            and self.c == other.c
            and self.pi_power == other.pi_power
            and tuple(self.exp_prefactor) == tuple(other.exp_prefactor)
            and self.twists == other.twists
            and self.terms == other.terms
        )


def parse_expansion(text: str, model: Optional[Model] = None) -> AsymptoticExpansion:
    """Parse the serialized expansion report (exact round-trip)."""
    lines = iter(text.splitlines())
    if next(lines, "").strip() != "expansion":
        raise ParseError("expected an expansion header")
    meta: dict = {"model": ""}
    twists = []
    terms: list[LaurentPoly] = []
    endpoint_variables: tuple[str, ...] = ()
    current_poly: list[str] = []
    in_v = False

    def flush():
        if in_v:
            terms.append(LaurentPoly.parse("\n".join(current_poly), endpoint_variables))

    for raw in lines:
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0]
        if head == "v":
            flush()
            in_v = True
            current_poly = []
        elif in_v and head not in {"end"}:
            current_poly.append(line)
        elif head == "end":
            break
        elif head == "model":
            meta["model"] = line.split(None, 1)[1] if len(parts) > 1 else ""
        elif head == "dimension":
            meta["dimension"] = int(parts[1])
        elif head == "start":
            meta["start"] = tuple(int(p) for p in parts[1:])
        elif head == "gamma":
            meta["gamma"] = parse_scalar(line.split(None, 1)[1])
        elif head == "c":
            meta["c"] = Fraction(parts[1])
        elif head == "pi_power":
            meta["pi_power"] = Fraction(parts[1])
        elif head == "first_grade":
            meta["first_grade"] = int(parts[1])
        elif head == "order":
            meta["order"] = int(parts[1])
        elif head == "endpoint_vars":
            endpoint_variables = tuple(parts[1:])
        elif head == "prefactor":
            body = line.split(None, 1)[1]
            meta["prefactor"] = tuple(parse_scalar(b) for b in body.split("|"))
        elif head == "twist":
            vals = [Fraction(p) for p in parts[1:]]
            alphas = tuple(RootOfUnity.from_fraction(v) for v in vals[:-1])
            twists.append(Twist(alphas=alphas, zeta=RootOfUnity.from_fraction(vals[-1])))
        else:
            raise ParseError(f"unknown line in expansion report: {raw!r}")
    flush()
    d = meta["dimension"]
    if model is None:
        # placeholder carrier; the counts-facing API needs the real model
        model = Model.from_offsets(
            [(1,) + (0,) * (d - 1), (-1,) + (0,) * (d - 1)], name=meta["model"]
        )
    return AsymptoticExpansion(
        model=model,
        gamma=meta["gamma"],
        c=meta["c"],
        pi_power=meta["pi_power"],
        exp_prefactor=meta["prefactor"],
        terms=terms,
        twists=tuple(twists),
        endpoint_variables=endpoint_variables,
        start=meta.get("start", (0,) * d),
        first_grade=meta["first_grade"],
        order=meta["order"],
    )


# ----------------------------------------------------------------------
# the assembly loop


def _integrate_component(poly: LaurentPoly, qform: QForm, nsv: int, out_vars):
    """Contract the s-variables of a component against the Gaussian.

    Returns a polynomial in the remaining (endpoint) variables whose
    coefficients are ScaledCoefficients carrying pi^(d/2)/sqrt(det).
    """
    acc: dict = {}
    for e, c in poly.terms.items():
        mom = gaussian_moment(qform, e[:nsv])
        if not mom:
            continue
        rest = tuple(e[nsv:])
        contrib = mom * c
        prev = acc.get(rest)
        acc[rest] = contrib if prev is None else prev + contrib
    return LaurentPoly(out_vars, acc)


def assemble_expansion(
    model: Model,
    numerator=None,
    order: int = 3,
    start: Sequence[int] | None = None,
    system: Optional[SaddleSystem] = None,
    check_theta: bool = True,
    _context: Optional[dict] = None,
) -> AsymptoticExpansion:
    """Full asymptotic expansion of q(start, . ; n) to the given order.

    The numerator defaults to the alternating orbit sum for the start
    point (small-step 2-d models); large-step or higher-dimensional models
    must supply one.  Orbit-summability should be certified beforehand
    (see group.certify_orbit_summable).
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    d = model.dimension
    start = tuple(int(x) for x in (start or (0,) * d))
    if len(start) != d or any(x < 0 for x in start):
        raise ValueError("start must lie in the nonnegative orthant")
    if system is None:
        system = saddle_mod.saddle_system(model)
    if numerator is None:
        if d != 2:
            raise NotImplementedError("orbit sums are built in for d=2 only; supply a numerator")
        numerator = group_mod.orbit_sum(model, *start).numerator
    elif any(start):
        raise NotImplementedError("user-supplied numerators fix the start point at the origin")

    svars = s_vars(d)
    evars = endpoint_vars(d)
    allvars = svars + evars
    ctx = _context if _context is not None else {}

    truncation = 2 * order + 2
    first_grade = None
    while True:
        shared = ctx.get(truncation)
        if shared is None:
            _, _, tail = expand_S_power(model, system, truncation)
            endpoint_series = expand_endpoint_monomial(d, truncation, allvars)
            tail_wide = GradedSeries(
                allvars, truncation, {g: p.embed(allvars) for g, p in tail.comps.items()}
            )
            shared = tail_wide * endpoint_series
            ctx[truncation] = shared
        nser = expand_numerator(numerator, model, system, truncation)
        nser = GradedSeries(
            allvars, truncation, {g: p.embed(allvars) for g, p in nser.comps.items()}
        )
        product = shared * nser
        _assert_parity(product, len(svars))
        integrals: dict[int, LaurentPoly] = {}
        for g in sorted(product.comps):
            ig = _integrate_component(product.comps[g], system.qform, len(svars), evars)
            if g % 2 == 1 and ig:
                raise EngineInconsistency("odd-grade Gaussian integral did not vanish")
            if ig and first_grade is None:
                first_grade = g
            if ig:
                integrals[g] = ig
        if first_grade is None:
            if truncation >= _MAX_TRUNCATION:
                raise EngineInconsistency(
                    "all Gaussian integrals vanish; numerator orbit sum may be zero"
                )
            truncation += 4
            continue
        needed = first_grade + 2 * (order - 1)
        if needed > truncation:
            truncation = needed
            continue
        break

    c = Fraction(d, 2) + Fraction(first_grade, 2) - 1
    if check_theta and d == 2:
        _cross_check_theta(model, c)

    # constant part of the Cauchy prefactor: (2 pi)^-d and x0_j^-1 per variable
    const = ScaledCoefficient(Fraction(1, 2 ** d), Fraction(-d))
    for x0 in system.dominant:
        const = const * scalar_inv(x0)
    terms = []
    for r in range(order):
        g = first_grade + 2 * r
        ig = integrals.get(g, LaurentPoly.zero(evars))
        sign = -1 if (g // 2) % 2 else 1
        vp = ig.map_coefficients(lambda cc: cc * const * sign)
        terms.append(vp)
    prefactor = tuple(simplify_scalar(scalar_inv(x0)) for x0 in system.dominant)
    expansion = AsymptoticExpansion(
        model=model,
        gamma=system.gamma,
        c=c,
        pi_power=Fraction(-d, 2),
        exp_prefactor=prefactor,
        terms=terms,
        twists=system.twists,
        endpoint_variables=evars,
        start=start,
        first_grade=first_grade,
        order=order,
    )
    _check_leading_positivity(expansion)
    return expansion


def _cross_check_theta(model: Model, c: Fraction):
    """c must equal pi/theta when the correlation angle is recognized."""
    try:
        target = model if model_mod.has_zero_drift(model) else model_mod.cramer_transform(model)[0]
        theta = model_mod.correlation_coefficient(target)
    except Exception:
        return
    if theta.pi_over_theta is not None and theta.pi_over_theta != c:
        raise EngineInconsistency(
            f"decay exponent c={c} disagrees with pi/theta={theta.pi_over_theta}"
        )


def _check_leading_positivity(expansion: AsymptoticExpansion):
    """v_1 must be positive at an interior sample point."""
    sample = tuple(3 for _ in range(expansion.dimension))
    total = None
    for e, cc in expansion.v(1).terms.items():
        term = cc.value if isinstance(cc, ScaledCoefficient) else cc
        for x, a in zip(sample, e):
            term = term * (Fraction(x) ** a)
        total = term if total is None else total + term
    if total is None or scalar_sign(total) <= 0:
        raise EngineInconsistency("leading coefficient function is not positive")


def expand_from_start(
    model: Model,
    start: Sequence[int],
    order: int = 3,
    system: Optional[SaddleSystem] = None,
    check_theta: bool = True,
    _context: Optional[dict] = None,
) -> AsymptoticExpansion:
    """Expansion of q(start, . ; n); the numerator is the orbit sum of
    x^(u+1) y^(v+1) for the given start (u, v)."""
    return assemble_expansion(
        model,
        order=order,
        start=start,
        system=system,
        check_theta=check_theta,
        _context=_context,
    )


# ----------------------------------------------------------------------
# symbolic starting point by interpolation


@dataclass
class MultivariateExpansion:
    """Expansion data with the starting point symbolic (zero-drift only).

    ``terms[p-1]`` is v_p(k, l, u, v): endpoint variables first, then
    starting-point variables.
    """

    model: Model
    gamma: object
    c: Fraction
    pi_power: Fraction
    terms: list[LaurentPoly]
    twists: tuple[Twist, ...]
    variables: tuple[str, ...]
    order: int
    grid_side: int

    def v(self, p: int) -> LaurentPoly:
        return self.terms[p - 1]


def _lagrange_basis(points: Sequence[int], var_index: int, nvars: int):
    """Expanded Lagrange basis polynomials over integer nodes."""
    basis = []
    for i, xi in enumerate(points):
        poly = {(0,) * nvars: Fraction(1)}
        denom = Fraction(1)
        for j, xj in enumerate(points):
            if i == j:
                continue
            denom *= Fraction(xi - xj)
            new: dict = {}
            for e, c in poly.items():
                e_up = list(e)
                e_up[var_index] += 1
                e_up = tuple(e_up)
                new[e_up] = new.get(e_up, Fraction(0)) + c
                new[e] = new.get(e, Fraction(0)) - c * xj
            poly = {e: c for e, c in new.items() if c}
        basis.append({e: c / denom for e, c in poly.items()})
    return basis


def interpolate_vp(
    model: Model,
    order: int = 3,
    verify_extra: int = 2,
    system: Optional[SaddleSystem] = None,
) -> MultivariateExpansion:
    """Recover v_p(k, l, u, v) by exact interpolation over starting points.

    Zero drift only (the coefficients are then polynomials).  The grid
    side is the endpoint-degree bound c + 2p - 1 plus one; extra held-out
    grid lines verify the bound, raising DegreeBoundViolated on mismatch.
    """
    if model.dimension != 2:
        raise NotImplementedError("symbolic starting points are implemented for d=2")
    if not model_mod.has_zero_drift(model):
        raise NonzeroDrift("coefficients are polynomials only for zero drift")
    if system is None:
        system = saddle_mod.saddle_system(model)
    ctx: dict = {}
    base = expand_from_start(model, (0, 0), order=order, system=system, _context=ctx)
    if base.c.denominator != 1:
        raise EngineInconsistency("integer decay exponent expected in 2-d")
    degree_bound = int(base.c) + 2 * order - 1
    side = degree_bound + 1
    evars = endpoint_vars(2)
    uvars = start_vars(2)
    allvars = evars + uvars
    expansions: dict[tuple[int, int], AsymptoticExpansion] = {(0, 0): base}
    for u in range(side):
        for v in range(side):
            if (u, v) not in expansions:
                expansions[(u, v)] = expand_from_start(
                    model, (u, v), order=order, system=system, check_theta=False, _context=ctx
                )
    for exp in expansions.values():
        if exp.first_grade != base.first_grade:
            raise EngineInconsistency("decay exponent varies with the starting point")

    nodes = list(range(side))
    lag_u = _lagrange_basis(nodes, 2, 4)
    lag_v = _lagrange_basis(nodes, 3, 4)
    terms = []
    for p in range(1, order + 1):
        acc: dict = {}
        for (u, v), exp in expansions.items():
            vp = exp.v(p)
            for e, c in vp.terms.items():
                for eu, cu in lag_u[u].items():
                    for ev, cv in lag_v[v].items():
                        key = (e[0], e[1], eu[2] + ev[2], eu[3] + ev[3])
                        contrib = c * (cu * cv)
                        prev = acc.get(key)
                        val = contrib if prev is None else prev + contrib
                        if val:
                            acc[key] = val
                        else:
                            acc.pop(key, None)
        terms.append(LaurentPoly(allvars, acc))

    # held-out verification
    held = [(side, j) for j in range(0, side + 1, max(1, side // max(1, verify_extra)))]
    held += [(j, side) for j in range(0, side, max(1, side // max(1, verify_extra)))]
    for (u, v) in held:
        exp = expand_from_start(
            model, (u, v), order=order, system=system, check_theta=False, _context=ctx
        )
        for p in range(1, order + 1):
            predicted = terms[p - 1].eval_partial({"u": u, "v": v}).rename(evars)
            if predicted != exp.v(p):
                raise DegreeBoundViolated(
                    f"interpolated v_{p} fails at held-out start {(u, v)}"
                )
    return MultivariateExpansion(
        model=model,
        gamma=base.gamma,
        c=base.c,
        pi_power=base.pi_power,
        terms=terms,
        twists=base.twists,
        variables=allvars,
        order=order,
        grid_side=side,
    )
