"""The group of a two-dimensional small-step model and its orbit sums.

The kernel K(x,y) = xy(1 - t S(x,y)) is quadratic in each of x and y;
its coefficient triples define two birational involutions whose alternating
orbit sums over the (finite) generated group produce the numerators that
drive the whole asymptotic engine.  Orbit-summability itself is certified
empirically against the path-counting oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import GroupInfinite, NotSmallSteps
from .laurent import LaurentPoly, RatFunc
from .model import Model, check_nondegenerate, poly_vars, step_polynomial
from .oracle import count_paths

KERNEL_VARS = ("x", "y", "t")
XY = ("x", "y")

DEFAULT_MAX_ORDER = 24
DEFAULT_CERTIFICATE_DEPTH = 8

# Elements of genuinely finite quadrant groups stay tiny; for infinite
# groups iterated composition blows up doubly fast, so a term budget turns
# the blowup into a prompt, honest GroupInfinite.
_IMAGE_TERM_BUDGET = 500


@dataclass(frozen=True)
class KernelDecomposition:
    """K = a(x) y^2 + b(x) y + c(x) = at(y) x^2 + bt(y) x + ct(y)."""

    kernel: LaurentPoly           # in (x, y, t)
    a: LaurentPoly
    b: LaurentPoly
    c: LaurentPoly
    a_tilde: LaurentPoly
    b_tilde: LaurentPoly
    c_tilde: LaurentPoly


@dataclass(frozen=True)
class GroupElement:
    """A birational map given by the images of (x, y), with its sign."""

    images: tuple[RatFunc, ...]
    word: str                     # reduced word in the generators F, S
    sign: int

    def apply_monomial(self, exponents) -> RatFunc:
        """Image of x^e0 y^e1 under the element."""
        out = RatFunc.from_poly(LaurentPoly.constant(XY, 1))
        for im, e in zip(self.images, exponents):
            if e:
                out = out * (im ** e)
        return out


@dataclass(frozen=True)
class OrbitSum:
    """Alternating orbit sum of x^(u+1) y^(v+1) over the group."""

    numerator: RatFunc
    monomial: tuple[int, ...]     # (u+1, v+1)


def _require_small_2d(model: Model):
    if model.dimension != 2:
        raise NotSmallSteps("kernel machinery is for two-dimensional models")
    if not model.small_steps:
        raise NotSmallSteps("kernel machinery needs small steps; supply a numerator file")


def kernel(model: Model) -> KernelDecomposition:
    """The kernel xy(1 - t S) and its coefficient triples."""
    _require_small_2d(model)
    S = step_polynomial(model).embed(KERNEL_VARS)
    xy = LaurentPoly.monomial(KERNEL_VARS, (1, 1, 0))
    t = LaurentPoly.monomial(KERNEL_VARS, (0, 0, 1))
    K = xy - t * xy * S

    def collect(poly, var_index):
        buckets: dict[int, dict] = {}
        for e, coef in poly.terms.items():
            buckets.setdefault(e[var_index], {})[
                tuple(0 if i == var_index else x for i, x in enumerate(e))
            ] = coef
        return {
            k: LaurentPoly(KERNEL_VARS, terms) for k, terms in buckets.items()
        }

    ys = collect(K, 1)
    xs = collect(K, 0)
    zero = LaurentPoly.zero(KERNEL_VARS)
    return KernelDecomposition(
        kernel=K,
        a=ys.get(2, zero),
        b=ys.get(1, zero),
        c=ys.get(0, zero),
        a_tilde=xs.get(2, zero),
        b_tilde=xs.get(1, zero),
        c_tilde=xs.get(0, zero),
    )


def _drop_t(poly: LaurentPoly) -> LaurentPoly:
    """Project a (x, y, t)-polynomial with a single t-power onto (x, y)."""
    terms: dict = {}
    tpows = {e[2] for e in poly.terms}
    if len(tpows) > 1:
        raise ValueError("mixed t powers cannot be projected")
    for e, c in poly.terms.items():
        terms[(e[0], e[1])] = c
    return LaurentPoly(XY, terms)


def generators(model: Model) -> tuple[GroupElement, GroupElement]:
    """The two involutions fixing 1 - t S(x, y).

    Phi sends (x, y) to (x, c(x)/(a(x) y)); Psi acts symmetrically on x.
    Both fix the step polynomial as an exact rational identity.
    """
    _require_small_2d(model)
    if not check_nondegenerate(model):
        # a(x), c(x) (or the tilde pair) would vanish identically
        raise NotSmallSteps("generators need a nondegenerate model")
    dec = kernel(model)
    x = RatFunc.variable(XY, "x")
    y = RatFunc.variable(XY, "y")
    ratio_y = RatFunc(_drop_t(dec.c), _drop_t(dec.a))
    ratio_x = RatFunc(_drop_t(dec.c_tilde), _drop_t(dec.a_tilde))
    phi = GroupElement(images=(x, ratio_y / y), word="F", sign=-1)
    psi = GroupElement(images=(ratio_x / x, y), word="S", sign=-1)
    return phi, psi


def _compose_element(g: GroupElement, h: GroupElement, word: str) -> GroupElement:
    """Element acting as first h, then g (maps compose right-to-left)."""
    images = tuple(im.compose(list(h.images)) for im in g.images)
    for im in images:
        if len(im.num.terms) + len(im.den.terms) > _IMAGE_TERM_BUDGET:
            raise GroupInfinite(
                "group element images exceed the size budget; the group is "
                "almost certainly infinite"
            )
    return GroupElement(images=images, word=word, sign=g.sign * h.sign)


def group_closure(model: Model, max_order: int = DEFAULT_MAX_ORDER) -> list[GroupElement]:
    """All distinct elements generated by alternating Phi, Psi words.

    Distinctness is exact RatFunc equality of image pairs.  Raises
    GroupInfinite when the closure exceeds ``max_order`` elements.
    """
    phi, psi = generators(model)
    identity = GroupElement(
        images=(RatFunc.variable(XY, "x"), RatFunc.variable(XY, "y")),
        word="",
        sign=1,
    )
    elements = [identity]
    frontier = [identity]
    while frontier:
        new = []
        for el in frontier:
            for gen in (phi, psi):
                if el.word.startswith(gen.word):
                    continue  # alternating words only
                cand = _compose_element(gen, el, gen.word + el.word)
                if not any(_images_equal(cand, e) for e in elements):
                    if len(elements) >= max_order:
                        raise GroupInfinite(
                            f"group closure exceeded {max_order} elements"
                        )
                    elements.append(cand)
                    new.append(cand)
        frontier = new
    return elements


def _images_equal(g1: GroupElement, g2: GroupElement) -> bool:
    return all(a == b for a, b in zip(g1.images, g2.images))


def orbit_sum(model: Model, u: int = 0, v: int = 0, max_order: int = DEFAULT_MAX_ORDER) -> OrbitSum:
    """Sum of sign(g) * g(x^(u+1) y^(v+1)) over the group."""
    if u < 0 or v < 0:
        raise ValueError("starting point must be in the nonnegative quadrant")
    elements = group_closure(model, max_order=max_order)
    mono = (u + 1, v + 1)
    total = RatFunc.from_poly(LaurentPoly.zero(XY))
    for g in elements:
        term = g.apply_monomial(mono)
        total = total + (term if g.sign > 0 else -term)
    return OrbitSum(numerator=total, monomial=mono)


@dataclass
class CertificateReport:
    passed: bool
    depth: int
    start: tuple[int, int]
    checked: int
    counterexample: Optional[tuple] = None  # ((k, l), n, extracted, counted)

    def __bool__(self):
        return self.passed


def certify_orbit_summable(
    model: Model,
    u: int = 0,
    v: int = 0,
    depth: int = DEFAULT_CERTIFICATE_DEPTH,
    numerator: Optional[RatFunc] = None,
) -> CertificateReport:
    """Empirical orbit-summability certificate.

    Checks, exactly, that [x^(k+1) y^(l+1)] S^n N equals the oracle count
    q((u,v), (k,l); n) for all 0 <= n <= depth and k, l >= 0 with
    k + l <= depth.  N defaults to the alternating orbit sum.
    """
    if numerator is None:
        numerator = orbit_sum(model, u, v).numerator
    S = step_polynomial(model)
    table = count_paths(model, (u, v), depth)
    # numerator window: product coefficients at exponents 1..depth+1 draw on
    # N-exponents within [1 - depth*smax, depth + 1 - depth*smin] per variable
    smin = S.min_exponents()
    smax = S.max_exponents()
    lo = tuple(1 - depth * smax[i] for i in range(2))
    hi = tuple(depth + 1 - depth * smin[i] for i in range(2))
    Nser = numerator.laurent_expansion(lo, hi)
    checked = 0
    power = LaurentPoly.constant(XY, 1)
    for n in range(depth + 1):
        if n:
            power = power * S
        SN = power * Nser
        for k in range(depth + 1):
            for l in range(depth + 1 - k):
                extracted = SN.coefficient((k + 1, l + 1))
                counted = table.count((k, l), n)
                checked += 1
                if extracted != counted:
                    return CertificateReport(
                        passed=False,
                        depth=depth,
                        start=(u, v),
                        checked=checked,
                        counterexample=((k, l), n, extracted, counted),
                    )
    return CertificateReport(passed=True, depth=depth, start=(u, v), checked=checked)
