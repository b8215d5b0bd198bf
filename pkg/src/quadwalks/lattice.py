"""Integer lattice utilities: Smith normal form and character enumeration.

Used for the step-difference lattice of a model: its quotient group
determines both the walk's periodicity and the root-of-unity twists of the
associated saddle points.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .field import RootOfUnity


def _identity(n: int):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(matrix):
    """Smith normal form over the integers.

    Returns ``(d, u, v)`` with ``u @ matrix @ v == d``, ``u`` and ``v``
    unimodular, and ``d`` diagonal with each entry dividing the next.
    """
    a = [list(map(int, row)) for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    u = _identity(m)
    v = _identity(n)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, k):
        for row in a:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(m, n):
        # find a pivot: nonzero entry of minimal absolute value
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (best is None or abs(a[i][j]) < best):
                    best = abs(a[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        dirty = False
        for i in range(t + 1, m):
            if a[i][t]:
                q = a[i][t] // a[t][t]
                add_row(i, t, -q)
                if a[i][t]:
                    dirty = True
        for j in range(t + 1, n):
            if a[t][j]:
                q = a[t][j] // a[t][t]
                add_col(j, t, -q)
                if a[t][j]:
                    dirty = True
        if dirty:
            continue
        # divisibility sweep: pivot must divide all remaining entries
        bad = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if a[i][j] % a[t][t]:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            add_row(t, bad, 1)
            continue
        if a[t][t] < 0:
            negate_row(t)
        t += 1
    return a, u, v


def step_difference_matrix(offsets):
    """Columns s_i - s_0 for the step offsets (d x (count-1))."""
    base = offsets[0]
    d = len(base)
    cols = [tuple(s[i] - base[i] for i in range(d)) for s in offsets[1:]]
    return [[c[i] for c in cols] for i in range(d)]


def lattice_quotient(offsets):
    """Structure of Z^d / L, where L is the step-difference lattice.

    Returns ``(invariants, u)``: the nontrivial invariant factors of the
    finite part and the unimodular row transform, or raises if the
    quotient is infinite (steps do not span Q^d affinely).
    """
    dmat = step_difference_matrix(offsets)
    d = len(dmat)
    snf, u, _ = smith_normal_form(dmat)
    diag = [snf[i][i] if i < len(snf[0]) else 0 for i in range(d)]
    if any(x == 0 for x in diag):
        raise ValueError("step differences do not span the full lattice")
    return diag, u


def coset_order(offsets) -> int:
    """Order of the common coset of the steps in Z^d / L.

    This is the walk's period: the smallest m >= 1 such that m * s lies in
    the difference lattice for any (hence every) step s.
    """
    dmat = step_difference_matrix(offsets)
    d = len(dmat)
    snf, u, _ = smith_normal_form(dmat)
    ncols = len(snf[0]) if snf else 0
    s0 = offsets[0]
    w = [sum(u[i][j] * s0[j] for j in range(d)) for i in range(d)]
    m = 1
    for i in range(d):
        a = snf[i][i] if i < ncols else 0
        if a == 0:
            if w[i] != 0:
                raise ValueError("steps have no finite period (never return)")
            continue
        g = gcd(a, w[i] % a)
        m = m * (a // g) // gcd(m, a // g)
    return m


def character_twists(offsets):
    """All characters of Z^d / L as root-of-unity twist tuples.

    Each character chi yields ``alphas = (chi(e_1), ..., chi(e_d))`` and
    ``zeta = chi(s)`` (the same for every step s).  The trivial character
    is included; the count equals the index ``|Z^d / L|``.
    """
    diag, u = lattice_quotient(offsets)
    d = len(diag)
    twists = []
    counters = [0] * d

    def emit(counter):
        w = [Fraction(0)] * d
        for i in range(d):
            if diag[i] > 1 and counter[i]:
                c = Fraction(counter[i], diag[i])
                for j in range(d):
                    w[j] += c * u[i][j]
        alphas = tuple(RootOfUnity.from_fraction(w[j]) for j in range(d))
        zetas = set()
        for s in offsets:
            zetas.add(RootOfUnity.from_fraction(sum(w[j] * s[j] for j in range(d))))
        assert len(zetas) == 1, "character is not constant on the steps"
        twists.append((alphas, zetas.pop()))

    def rec(i):
        if i == d:
            emit(counters)
            return
        for c in range(diag[i]):
            counters[i] = c
            rec(i + 1)
        counters[i] = 0

    rec(0)
    return twists
