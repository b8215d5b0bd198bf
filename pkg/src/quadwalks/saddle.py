"""Dominant saddle point, associated twists, and the local quadratic form.

The dominant saddle is the minimizer of the step polynomial over the
positive orthant.  Zero-drift models sit at the all-ones point; otherwise
an exact radical closed form is attempted (coordinates r**(p/q)), with a
certified interval enclosure as the fallback.  Associated saddle points
live on the same torus and are enumerated exactly as characters of the
step-difference quotient lattice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from . import lattice
from .errors import (
    DegenerateModel,
    NotPositiveDefinite,
    NumeratorSingularAtSaddle,
    PrecisionInsufficient,
)
from .field import Ball, Rad, RootOfUnity, iv_workdps, scalar_inv, scalar_sign, simplify_scalar
from .laurent import LaurentPoly, RatFunc
from .model import Model, check_nondegenerate, has_zero_drift, step_polynomial

_RECOGNITION_INDICES = (1, 2, 3, 4, 6)
_NEWTON_DPS = 60


@dataclass(frozen=True)
class Twist:
    """Root-of-unity data of one associated saddle point."""

    alphas: tuple[RootOfUnity, ...]
    zeta: RootOfUnity

    def is_trivial(self) -> bool:
        return all(a.is_one() for a in self.alphas) and self.zeta.is_one()


@dataclass(frozen=True)
class QForm:
    """Positive definite quadratic form Q(sigma) = sigma^T M sigma."""

    matrix: tuple[tuple[object, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.matrix)

    def value(self, sigma) -> object:
        d = self.dimension
        total = Fraction(0)
        for i in range(d):
            for j in range(d):
                total = total + self.matrix[i][j] * sigma[i] * sigma[j]
        return total

    def leading_minors(self):
        d = self.dimension
        out = []
        for k in range(1, d + 1):
            sub = [row[:k] for row in self.matrix[:k]]
            out.append(_det(sub))
        return out

    def det(self):
        return _det([list(row) for row in self.matrix])

    def is_positive_definite(self) -> bool:
        return all(scalar_sign(m) > 0 for m in self.leading_minors())

    def covariance(self):
        """Inverse matrix divided by 2 (the Gaussian moment covariance)."""
        inv = _mat_inverse([list(row) for row in self.matrix])
        half = Fraction(1, 2)
        return tuple(tuple(simplify_scalar(x * half) for x in row) for row in inv)


def _det(mat):
    n = len(mat)
    if n == 1:
        return mat[0][0]
    if n == 2:
        return mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
        term = mat[0][j] * _det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def _mat_inverse(mat):
    n = len(mat)
    d = _det(mat)
    inv_d = scalar_inv(d)
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [mat[r][c] for c in range(n) if c != i]
                for r in range(n)
                if r != j
            ]
            cof = _det(minor) if minor else Fraction(1)
            if (i + j) % 2:
                cof = -cof
            out[i][j] = cof * inv_d
    return out


@dataclass(frozen=True)
class SaddleSystem:
    """Dominant saddle coordinates, growth rate, twists and local form."""

    dominant: tuple
    gamma: object
    twists: tuple[Twist, ...]
    qform: QForm


# ----------------------------------------------------------------------
# dominant saddle point


def _numeric_saddle(model: Model, dps: int):
    """High-precision Newton iteration in log coordinates.

    log S(exp(u)) is strictly convex for a nondegenerate model, so the
    undamped Newton iteration from the origin converges to the unique
    positive critical point.
    """
    d = model.dimension
    steps = [(s.offsets, s.weight) for s in model.steps]
    with mpmath.workdps(dps):
        u = [mpmath.mpf(0)] * d
        for _ in range(200):
            total = mpmath.mpf(0)
            grad = [mpmath.mpf(0)] * d
            hess = [[mpmath.mpf(0)] * d for _ in range(d)]
            for off, w in steps:
                wv = mpmath.mpf(w.numerator) / w.denominator if isinstance(w, Fraction) else mpmath.mpf(w)
                e = wv * mpmath.exp(mpmath.fsum(o * u[i] for i, o in enumerate(off)))
                total += e
                for i in range(d):
                    grad[i] += off[i] * e
                    for j in range(d):
                        hess[i][j] += off[i] * off[j] * e
            g = [grad[i] / total for i in range(d)]
            h = [
                [hess[i][j] / total - g[i] * g[j] for j in range(d)]
                for i in range(d)
            ]
            step_vec = _solve_mpf(h, g)
            u = [u[i] - step_vec[i] for i in range(d)]
            if max(abs(x) for x in g) < mpmath.mpf(10) ** (-dps + 8):
                break
        return [mpmath.exp(x) for x in u]


def _solve_mpf(a, b):
    n = len(b)
    m = [row[:] + [b[i]] for i, row in enumerate(a)]
    for c in range(n):
        piv = max(range(c, n), key=lambda r: abs(m[r][c]))
        m[c], m[piv] = m[piv], m[c]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c] / m[c][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [m[i][n] / m[i][i] for i in range(n)]


def _recognize_radical(value, dps: int):
    """Try to write a positive numeric value as r**(1/q), r rational."""
    with mpmath.workdps(dps):
        for q in _RECOGNITION_INDICES:
            power = value ** q
            cand = _rationalize(power)
            if cand is None or cand <= 0:
                continue
            err = abs(power - mpmath.mpf(cand.numerator) / cand.denominator)
            if err < mpmath.mpf(10) ** (-(dps * 2) // 3):
                if q == 1:
                    return cand
                return simplify_scalar(Rad.root(cand, q))
    return None


def _rationalize(x, max_den: int = 10**6):
    try:
        return Fraction(str(x)).limit_denominator(max_den)
    except (ValueError, ZeroDivisionError):
        return None


def find_dominant(model: Model):
    """Minimizer of S over the positive orthant and gamma = S(minimizer).

    Exact when the drift vanishes (all-ones) or every coordinate is a
    recognized radical verified against the critical equations; otherwise
    a certified interval enclosure (Krawczyk test).
    """
    if not check_nondegenerate(model):
        raise DegenerateModel("no interior minimizer for a degenerate model")
    S = step_polynomial(model)
    if has_zero_drift(model):
        ones = tuple(Fraction(1) for _ in range(model.dimension))
        return ones, simplify_scalar(S.eval(ones))
    approx = _numeric_saddle(model, _NEWTON_DPS)
    grads = _gradient_polys_clean(model)
    candidate = []
    for v in approx:
        r = _recognize_radical(v, _NEWTON_DPS)
        if r is None:
            candidate = None
            break
        candidate.append(r)
    if candidate is not None:
        if all(not _gp.eval(candidate) for _gp in grads):
            point = tuple(candidate)
            return point, simplify_scalar(S.eval(point))
    point = _certified_saddle(model, grads)
    return point, S.eval(point)


def _gradient_polys_clean(model: Model) -> list[LaurentPoly]:
    variables = step_polynomial(model).vars
    out = []
    for j in range(model.dimension):
        terms = {}
        for s in model.steps:
            if s.offsets[j]:
                terms[s.offsets] = s.weight * s.offsets[j]
        out.append(LaurentPoly(variables, terms))
    return out


def _certified_saddle(model: Model, grads, dps: int = 120):
    """Krawczyk-certified interval enclosure of the positive critical point.

    With F the gradient system, m the numeric approximation, Y the inverse
    of the midpoint Jacobian and X a box around m, the Krawczyk operator
    K(X) = m - Y F(m) + (I - Y J(X))(X - m) mapping X into its interior
    proves a unique zero inside X.
    """
    d = model.dimension
    approx = _numeric_saddle(model, dps)
    with mpmath.workdps(dps), iv_workdps(dps):
        mid_iv = [mpmath.iv.mpf(str(approx[i])) for i in range(d)]
        fmid = [g.eval([Ball(v) for v in mid_iv]).iv for g in grads]
        delta = mpmath.mpf(10) ** (-(dps * 2) // 3)
        for _ in range(6):
            box = [
                mpmath.iv.mpf([approx[i] - delta, approx[i] + delta])
                for i in range(d)
            ]
            boxb = [Ball(b) for b in box]
            jac = [
                [g.derivative(g.vars[k]).eval(boxb).iv for k in range(d)]
                for g in grads
            ]
            ymat = _mpf_inverse(
                [[mpmath.mpf(jac[i][k].mid) for k in range(d)] for i in range(d)]
            )
            yiv = [[mpmath.iv.mpf(str(ymat[i][k])) for k in range(d)] for i in range(d)]
            ok = True
            k_box = []
            for i in range(d):
                s1 = sum((yiv[i][k] * fmid[k] for k in range(d)), mpmath.iv.mpf(0))
                s2 = mpmath.iv.mpf(0)
                for k in range(d):
                    coeff = (mpmath.iv.mpf(1) if i == k else mpmath.iv.mpf(0)) - sum(
                        (yiv[i][r] * jac[r][k] for r in range(d)), mpmath.iv.mpf(0)
                    )
                    s2 += coeff * (box[k] - mid_iv[k])
                kv = mid_iv[i] - s1 + s2
                k_box.append(kv)
                if not (kv.a > box[i].a and kv.b < box[i].b):
                    ok = False
            if ok:
                return tuple(Ball(b) for b in k_box)
            delta = delta * 1000
        raise PrecisionInsufficient("could not certify the saddle enclosure")


def _mpf_inverse(a):
    n = len(a)
    m = [row[:] + [mpmath.mpf(1) if i == j else mpmath.mpf(0) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = max(range(c, n), key=lambda r: abs(m[r][c]))
        m[c], m[piv] = m[piv], m[c]
        f = m[c][c]
        m[c] = [x / f for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


# ----------------------------------------------------------------------
# associated saddles and local form


def associated_saddles(model: Model) -> tuple[Twist, ...]:
    """All torus points sharing the dominant modulus, as character twists.

    The trivial twist is included; the count equals the index of the
    step-difference lattice.
    """
    pairs = lattice.character_twists(model.offsets)
    twists = [Twist(alphas=alphas, zeta=zeta) for alphas, zeta in pairs]
    twists.sort(key=lambda t: tuple(a.exponent for a in t.alphas))
    return tuple(twists)


def local_qform(model: Model, saddle_point) -> QForm:
    """Quadratic form of log(S/gamma) under x_j -> x0_j exp(i s_j / sqrt n).

    Exact second-moment formula at a critical point:
    M_jk = sum_s w_s x0^s s_j s_k / (2 gamma).
    """
    d = model.dimension
    S = step_polynomial(model)
    gamma = S.eval(saddle_point)
    grads = _gradient_polys_clean(model)
    for g in grads:
        if g.eval(saddle_point):
            raise ValueError("local_qform needs a critical point of S")
    inv_2g = scalar_inv(2 * gamma)
    rows = []
    for j in range(d):
        row = []
        for k in range(d):
            total = Fraction(0)
            for s in model.steps:
                if s.offsets[j] and s.offsets[k]:
                    mono = LaurentPoly.monomial(S.vars, s.offsets, s.weight)
                    total = total + mono.eval(saddle_point) * (s.offsets[j] * s.offsets[k])
            row.append(simplify_scalar(total * inv_2g))
        rows.append(tuple(row))
    q = QForm(matrix=tuple(rows))
    if not q.is_positive_definite():
        raise NotPositiveDefinite("saddle point is not a strict minimum")
    return q


def saddle_system(model: Model) -> SaddleSystem:
    """Dominant point, growth constant, twist list, and local form."""
    point, gamma = find_dominant(model)
    qform = local_qform(model, point)
    twists = associated_saddles(model)
    return SaddleSystem(dominant=tuple(point), gamma=gamma, twists=twists, qform=qform)


def numerator_regular_at(saddle_point, numerator) -> tuple[bool, object]:
    """Whether the numerator's denominator is nonzero at the saddle.

    Accepts an OrbitSum or a RatFunc; returns (regular, value or None).
    """
    rf = getattr(numerator, "numerator", numerator)
    if isinstance(rf, LaurentPoly):
        rf = RatFunc.from_poly(rf)
    den_value = rf.den.eval(saddle_point)
    if not den_value:
        return False, None
    value = rf.num.eval(saddle_point) * scalar_inv(den_value)
    return True, simplify_scalar(value)
