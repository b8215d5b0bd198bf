"""Discrete Laplacians, polyharmonicity checks, bases, and decompositions.

All notions here use the Dirichlet zero-extension convention: a function
given by a polynomial (times an optional exponential prefactor) on the
orthant is extended by zero outside, and iterated Laplacians re-impose the
zero extension between applications -- the combination that the counting
recurrence actually satisfies.  Verification is literal nested stencil
evaluation, never polynomial shortcuts, because away from the interior the
polynomial and the extension disagree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .errors import (
    DecompositionInfeasible,
    NoSolutionWithinDegreeBound,
)
from .field import ScaledCoefficient, scalar_inv, simplify_scalar
from .laurent import LaurentPoly, grlex_key
from .model import Model, reverse


@dataclass(frozen=True)
class PolyharmonicFn:
    """Polynomial (x exponential prefactor) with zero extension.

    The value at an orthant point x is poly(x) * prod_j prefactor[j]**x_j,
    and 0 at points with any coordinate below ``origin_offset``.
    """

    poly: LaurentPoly
    eigenvalue: object
    prefactor: tuple = ()
    claimed_order: int = 1
    origin_offset: int = 0

    @property
    def dimension(self) -> int:
        return len(self.poly.vars)

    def inside(self, point) -> bool:
        return all(x >= self.origin_offset for x in point)

    def value(self, point):
        """Zero-extended value at an integer point."""
        if not self.inside(point):
            return Fraction(0)
        val = self.poly.eval([Fraction(x) for x in point])
        for base, x in zip(self.prefactor, point):
            if x:
                val = val * (base ** x if x > 0 else scalar_inv(base) ** (-x))
        return val

    def __call__(self, point):
        return self.value(point)


def apply_laplacian(model: Model, f, point, t) -> object:
    """(P - t id) f at a point: sum_s w_s f(point - s) - t f(point).

    ``f`` is any callable on integer points honouring its own zero
    extension (PolyharmonicFn does).
    """
    point = tuple(point)
    total = None
    for s in model.steps:
        val = f(tuple(x - o for x, o in zip(point, s.offsets)))
        term = s.weight * val
        total = term if total is None else total + term
    total = total - t * f(point)
    return simplify_scalar(total) if not isinstance(total, (Fraction, ScaledCoefficient)) else total


def apply_adjoint_laplacian(model: Model, f, point, t) -> object:
    """The Laplacian of the reversed model (the lattice adjoint)."""
    return apply_laplacian(reverse(model), f, point, t)


@dataclass
class VerifyResult:
    passed: bool
    order: int
    window: tuple
    witness: Optional[tuple] = None   # (point, value)

    def __bool__(self):
        return self.passed


def _window_points(window):
    ranges = [range(lo, hi + 1) for lo, hi in window]
    return itertools.product(*ranges)


def verify_polyharmonic(
    model: Model,
    fn: PolyharmonicFn,
    order: int,
    window=((0, 30), (0, 30)),
) -> VerifyResult:
    """Exact check that the order-th iterated Laplacian vanishes on a window.

    Grid evaluation: level 0 is the zero-extended function; each level
    applies the stencil and re-imposes zero outside the orthant.  Passes
    iff every window point is exactly zero at the final level.
    """
    d = model.dimension
    window = tuple(tuple(w) for w in window)
    if len(window) != d:
        raise ValueError("window dimension mismatch")
    t = fn.eigenvalue
    reach = max(max(abs(o) for o in s.offsets) for s in model.steps)
    lo = [window[i][0] - order * reach for i in range(d)]
    hi = [window[i][1] + order * reach for i in range(d)]
    offs = fn.origin_offset
    grid: dict = {}
    for pt in itertools.product(*[range(l, h + 1) for l, h in zip(lo, hi)]):
        grid[pt] = fn.value(pt)
    for level in range(order):
        lo = [l + reach for l in lo]
        hi = [h - reach for h in hi]
        new: dict = {}
        for pt in itertools.product(*[range(l, h + 1) for l, h in zip(lo, hi)]):
            if any(x < offs for x in pt):
                new[pt] = Fraction(0)  # re-imposed zero extension
                continue
            total = None
            for s in model.steps:
                term = s.weight * grid[tuple(x - o for x, o in zip(pt, s.offsets))]
                total = term if total is None else total + term
            new[pt] = total - t * grid[pt]
        grid = new
    for pt in _window_points(window):
        if grid[pt]:
            return VerifyResult(False, order, window, witness=(pt, grid[pt]))
    return VerifyResult(True, order, window)


def multivariate_value_fn(vp: LaurentPoly, origin_offset: int = 0) -> Callable:
    """Zero-extended evaluation of v(k, l, u, v) on the product orthant."""

    def value(point):
        if any(x < origin_offset for x in point):
            return Fraction(0)
        return vp.eval([Fraction(x) for x in point])

    return value


def verify_multivariate_polyharmonic(
    model: Model,
    vp: LaurentPoly,
    order: int,
    points: Sequence[tuple],
    origin_offset: int = 0,
    eigenvalue=None,
    check_commutation: bool = True,
) -> VerifyResult:
    """Check that every mixed power Lap^a AdjLap^b (a + b = order) kills v.

    The forward Laplacian acts on the endpoint pair (first two variables),
    the adjoint on the starting pair (last two); the zero extension over
    the product orthant is re-imposed at every level.  Evaluated at the
    given sample points; exact arithmetic throughout.
    """
    if model.dimension != 2 or len(vp.vars) != 4:
        raise ValueError("multivariate check expects a 2-d model and 4 variables")
    t = eigenvalue
    if t is None:
        total = Fraction(0)
        for s in model.steps:
            total += s.weight
        t = total
    base = multivariate_value_fn(vp, origin_offset)
    fwd = [((s.offsets[0], s.offsets[1], 0, 0), s.weight) for s in model.steps]
    adj = [((0, 0, -s.offsets[0], -s.offsets[1]), s.weight) for s in model.steps]

    def nested(ops, level, pt, memo):
        if level == 0:
            return base(pt)
        if any(x < origin_offset for x in pt):
            return Fraction(0)  # re-imposed zero extension at every level
        key = (level, pt)
        hit = memo.get(key)
        if hit is not None:
            return hit
        stencil = ops[level - 1]
        total = None
        for off, w in stencil:
            term = w * nested(ops, level - 1, tuple(x - o for x, o in zip(pt, off)), memo)
            total = term if total is None else total + term
        total = total - t * nested(ops, level - 1, pt, memo)
        memo[key] = total
        return total

    for a in range(order + 1):
        b = order - a
        ops = [adj] * b + [fwd] * a  # apply adjoint first, then forward
        memo: dict = {}
        for pt in points:
            val = nested(ops, order, tuple(pt), memo)
            if val:
                return VerifyResult(False, order, (a, b), witness=(tuple(pt), val))
            if check_commutation and a and b:
                ops_swapped = [fwd] * a + [adj] * b
                val2 = nested(ops_swapped, order, tuple(pt), {})
                if val2 != val:
                    return VerifyResult(False, order, (a, b), witness=(tuple(pt), val2))
    return VerifyResult(True, order, ("multivariate", order))


# ----------------------------------------------------------------------
# polynomial basis construction


@dataclass
class PolyBasis:
    """Ladder basis h_n^m: entries of increasing polyharmonic order n.

    Ladder relation: Lap h_{n+1}^m = h_n^m exactly (with the zero
    extension) on the construction window.
    """

    model: Model
    eigenvalue: object
    entries: dict
    origin_offset: int = 0
    ladder_checked: bool = False

    def entry(self, n: int, m: int) -> PolyharmonicFn:
        return self.entries[(n, m)]


def _monomials_upto(variables, degree):
    out = []
    d = len(variables)
    for e in itertools.product(range(degree + 1), repeat=d):
        if sum(e) <= degree:
            out.append(e)
    out.sort(key=grlex_key)
    return out


def _stencil_of_monomial(model, mono, pt, t, origin_offset, variables):
    """Laplacian of the zero-extended monomial at a point."""
    def val(q):
        if any(x < origin_offset for x in q):
            return Fraction(0)
        v = Fraction(1)
        for x, a in zip(q, mono):
            v *= Fraction(x) ** a
        return v

    total = Fraction(0)
    for s in model.steps:
        total += s.weight * val(tuple(x - o for x, o in zip(pt, s.offsets)))
    return total - t * val(pt)


def _solve_linear_system(rows, rhs):
    """Exact solve of possibly overdetermined system; returns (particular,
    nullspace basis) or None when inconsistent."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = scalar_inv(aug[r][c])
        aug[r] = [x * inv for x in aug[r]]
        for i in range(nrows):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if aug[i][ncols]:
            return None  # inconsistent
    particular = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        particular[c] = aug[i][ncols]
    free = [c for c in range(ncols) if c not in pivots]
    null = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -aug[i][fc]
        null.append(vec)
    return particular, null


def _harmonic_space(model, t, degree, origin_offset, variables):
    """Basis vectors (coefficient dicts) of Dirichlet-harmonic polynomials
    of total degree <= degree."""
    monos = _monomials_upto(variables, degree)
    window = degree + 3
    pts = [
        pt
        for pt in itertools.product(
            range(origin_offset, origin_offset + window + 1), repeat=len(variables)
        )
    ]
    rows = []
    for pt in pts:
        rows.append([
            _stencil_of_monomial(model, mono, pt, t, origin_offset, variables)
            for mono in monos
        ])
    solved = _solve_linear_system(rows, [Fraction(0)] * len(rows))
    _, null = solved
    return monos, null


def _echelonize(monos, vectors):
    """Reduced echelon form w.r.t. descending graded-lex monomial order."""
    order = sorted(range(len(monos)), key=lambda i: grlex_key(monos[i]), reverse=True)
    basis = []
    for vec in vectors:
        v = list(vec)
        for piv_idx, piv_vec in basis:
            if v[piv_idx]:
                f = v[piv_idx]
                v = [a - f * b for a, b in zip(v, piv_vec)]
        lead = next((i for i in order if v[i]), None)
        if lead is None:
            continue
        inv = scalar_inv(v[lead])
        v = [a * inv for a in v]
        basis.append((lead, v))
        # back-substitute into earlier vectors
        for j, (pi, pv) in enumerate(basis[:-1]):
            if pv[lead]:
                f = pv[lead]
                basis[j] = (pi, [a - f * b for a, b in zip(pv, v)])
    basis.sort(key=lambda iv: grlex_key(monos[iv[0]]))
    return basis


def build_basis(
    model: Model,
    eigenvalue=None,
    max_n: int = 3,
    max_m: int = 3,
    origin_offset: int = 0,
    degree_cap: int = 14,
) -> PolyBasis:
    """Construct a ladder basis of Dirichlet polyharmonic polynomials.

    h_1^m enumerates an echelonized basis of the harmonic polynomials by
    increasing degree; h_{n+1}^m solves Lap h = h_n^m as an exact linear
    system (coefficients on a window large enough to force the polynomial
    identities), echelon-reduced modulo the harmonic space, with unit
    leading coefficient.  Raises NoSolutionWithinDegreeBound if the degree
    cap is hit.
    """
    variables = ("k", "l") if model.dimension == 2 else tuple(
        f"k{i+1}" for i in range(model.dimension)
    )
    if eigenvalue is None:
        eigenvalue = Fraction(0)
        for s in model.steps:
            eigenvalue += s.weight
    t = eigenvalue
    entries: dict = {}
    # harmonic layer: grow the degree until max_m independent solutions
    degree = 1
    monos: list = []
    ech: list = []
    while True:
        monos, null = _harmonic_space(model, t, degree, origin_offset, variables)
        ech = _echelonize(monos, null)
        if len(ech) >= max_m:
            break
        degree += 1
        if degree > degree_cap:
            raise NoSolutionWithinDegreeBound(
                f"only {len(ech)} harmonic functions up to degree {degree_cap}"
            )
    for m in range(1, max_m + 1):
        lead, vec = ech[m - 1]
        entries[(1, m)] = _fn_from_vec(model, monos, vec, t, origin_offset, variables)
    # ladder layers
    for n in range(1, max_n):
        for m in range(1, max_m + 1):
            if (n, m) not in entries:
                continue
            target = entries[(n, m)]
            entries[(n + 1, m)] = _solve_ladder(
                model, t, target, origin_offset, variables, degree_cap, n + 1
            )
    basis = PolyBasis(
        model=model,
        eigenvalue=t,
        entries=entries,
        origin_offset=origin_offset,
    )
    basis.ladder_checked = _check_ladder(model, basis)
    return basis


def _fn_from_vec(model, monos, vec, t, origin_offset, variables, order=1):
    terms = {mono: c for mono, c in zip(monos, vec) if c}
    return PolyharmonicFn(
        poly=LaurentPoly(variables, terms),
        eigenvalue=t,
        prefactor=(),
        claimed_order=order,
        origin_offset=origin_offset,
    )


def _solve_ladder(model, t, target, origin_offset, variables, degree_cap, order):
    degree = target.poly.total_degree() + 2
    while degree <= degree_cap:
        monos = _monomials_upto(variables, degree)
        window = degree + 3
        pts = list(
            itertools.product(
                range(origin_offset, origin_offset + window + 1), repeat=len(variables)
            )
        )
        rows = [
            [
                _stencil_of_monomial(model, mono, pt, t, origin_offset, variables)
                for mono in monos
            ]
            for pt in pts
        ]
        rhs = [target.value(pt) for pt in pts]
        solved = _solve_linear_system(rows, rhs)
        if solved is not None:
            particular, null = solved
            # canonical representative: reduce modulo the homogeneous
            # (harmonic) space; no rescaling, which would break the exact
            # ladder relation Lap h_{n+1} = h_n
            ech = _echelonize(monos, null)
            v = list(particular)
            for lead, basis_vec in reversed(ech):
                if v[lead]:
                    f = v[lead]
                    v = [a - f * b for a, b in zip(v, basis_vec)]
            return _fn_from_vec(model, monos, v, t, origin_offset, variables, order)
        degree += 1
    raise NoSolutionWithinDegreeBound(
        f"no ladder solution within degree {degree_cap}"
    )


def _check_ladder(model, basis: PolyBasis, window_hi: int = 12) -> bool:
    """Lap h_{n+1}^m = h_n^m pointwise on a verification window."""
    offs = basis.origin_offset
    window = [(offs, offs + window_hi)] * model.dimension
    for (n, m), fn in basis.entries.items():
        if (n + 1, m) not in basis.entries:
            continue
        upper = basis.entries[(n + 1, m)]
        for pt in _window_points(window):
            lhs = apply_laplacian(model, upper, pt, basis.eigenvalue)
            if lhs != fn.value(pt):
                return False
    return True


# ----------------------------------------------------------------------
# decomposition into products of basis functions


@dataclass
class Decomposition:
    """v_p = sum a[(n, m, n', m')] h_n^m(endpoint) g_n'^m'(start)."""

    coefficients: dict
    order: int
    residual_zero: bool

    def summand_count(self) -> int:
        return sum(1 for c in self.coefficients.values() if c)


def decomposition_index_set(p: int):
    """Allowed (h, adjoint-h) index pairs for order p.

    Pairs ((n, m), (n', m')) with (n+m) + (n'+m') <= p + 3; the count
    equals p(p+1)(p+2)(p+3)/24.
    """
    out = []
    for n in range(1, p + 1):
        for m in range(1, p + 2 - n):
            for n2 in range(1, p + 1):
                for m2 in range(1, p + 2 - n2):
                    if (n + m) + (n2 + m2) <= p + 3:
                        out.append((n, m, n2, m2))
    return out


def decompose(
    vp: LaurentPoly,
    basis: PolyBasis,
    adjoint_basis: PolyBasis,
    p: int,
) -> Decomposition:
    """Exact decomposition of a multivariate coefficient polynomial.

    ``vp`` lives in (endpoint vars, start vars); the basis supplies the
    endpoint factors and the adjoint basis the start factors.  Raises
    DecompositionInfeasible when vp is not in the span (residual nonzero).
    """
    index_set = decomposition_index_set(p)
    bound = p * (p + 1) * (p + 2) * (p + 3) // 24
    assert len(index_set) == bound
    variables = vp.vars
    products = []
    used = []
    for (n, m, n2, m2) in index_set:
        if (n, m) not in basis.entries or (n2, m2) not in adjoint_basis.entries:
            continue
        h = basis.entry(n, m).poly.embed(variables[:2]).embed(variables)
        g = adjoint_basis.entry(n2, m2).poly.rename(variables[2:]).embed(variables)
        products.append(h * g)
        used.append((n, m, n2, m2))
    all_monos = sorted(
        {e for prod in products for e in prod.terms} | set(vp.terms), key=grlex_key
    )
    rows = [
        [prod.terms.get(e, Fraction(0)) for prod in products] for e in all_monos
    ]
    rhs = [vp.terms.get(e, Fraction(0)) for e in all_monos]
    solved = _solve_linear_system(rows, rhs)
    if solved is None:
        raise DecompositionInfeasible(
            f"order-{p} coefficient is outside the basis-product span"
        )
    particular, _null = solved
    coeffs = {idx: c for idx, c in zip(used, particular) if c}
    assert len(coeffs) <= bound
    return Decomposition(coefficients=coeffs, order=p, residual_zero=True)


def leading_homogeneous(poly: LaurentPoly) -> LaurentPoly:
    """Top total-degree homogeneous part."""
    if not poly.terms:
        return poly
    top = max(sum(e) for e in poly.terms)
    return LaurentPoly(
        poly.vars, {e: c for e, c in poly.terms.items() if sum(e) == top}
    )


def conjugate_by_cramer(fn: PolyharmonicFn, multipliers) -> PolyharmonicFn:
    """Transport a polyharmonic function across the Cramer transform.

    Multiplying by prod_j alpha_j^(-x_j) turns a function polyharmonic for
    the drift-free transformed model into one polyharmonic (same order)
    for the original model, and conversely with inverted multipliers.
    """
    prefactor = list(fn.prefactor) or [Fraction(1)] * fn.dimension
    new = tuple(
        simplify_scalar(b * scalar_inv(a)) for b, a in zip(prefactor, multipliers)
    )
    return PolyharmonicFn(
        poly=fn.poly,
        eigenvalue=fn.eigenvalue,
        prefactor=new,
        claimed_order=fn.claimed_order,
        origin_offset=fn.origin_offset,
    )
