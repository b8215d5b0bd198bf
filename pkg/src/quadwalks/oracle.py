"""Exact brute-force path counting and convergence diagnostics.

The dynamic program is the ground truth everything else is checked
against: layered counts over the nonnegative orthant with exact (big
integer / rational / radical) weights.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from .errors import PrecisionInsufficient
from .field import scalar_numeric, simplify_scalar
from .model import Model


@dataclass
class CountTable:
    """Layered exact counts q(start, point; n) for 0 <= n <= horizon."""

    model: Model
    start: tuple[int, ...]
    horizon: int
    layers: list[dict[tuple[int, ...], object]]

    def count(self, endpoint, n: int):
        if n < 0 or n > self.horizon:
            raise ValueError(f"n={n} outside table horizon {self.horizon}")
        return self.layers[n].get(tuple(endpoint), Fraction(0))


def count_paths(model: Model, start, n_max: int, box=None) -> CountTable:
    """Exact weighted counts of orthant paths from ``start``.

    With ``box`` (per-coordinate upper bounds) the state space is clipped;
    the caller is responsible for the box being large enough for the
    endpoints of interest.  Without a box the reachable set is exact.
    """
    start = tuple(int(v) for v in start)
    d = model.dimension
    if len(start) != d or any(v < 0 for v in start):
        raise ValueError("start must be a point of the nonnegative orthant")
    unit_weights = all(isinstance(s.weight, Fraction) and s.weight == 1 for s in model.steps)
    one = 1 if unit_weights else Fraction(1)
    steps = [(s.offsets, s.weight) for s in model.steps]
    cur: dict[tuple[int, ...], object] = {start: one}
    layers = [cur]
    for _ in range(n_max):
        nxt: dict[tuple[int, ...], object] = {}
        for pt, c in cur.items():
            for off, w in steps:
                q = tuple(p + o for p, o in zip(pt, off))
                if any(x < 0 for x in q):
                    continue
                if box is not None and any(x > b for x, b in zip(q, box)):
                    continue
                prev = nxt.get(q)
                cw = c * w
                nxt[q] = cw if prev is None else prev + cw
        layers.append(nxt)
        cur = nxt
    return CountTable(model=model, start=start, horizon=n_max, layers=layers)


def dual_recurrence_check(model: Model, tables: dict, n_triples: int = 100, seed: int = 0) -> bool:
    """Verify both one-step recurrences on random (start, end, n) triples.

    End side: q(A,B;n) = sum_s w_s q(A, B-s; n-1)   (last step),
    start side: q(A,B;n) = sum_s w_s q(A+s, B; n-1) (first step),
    with counts vanishing outside the orthant.  ``tables`` maps start
    points to CountTables of the same horizon.
    """
    rng = random.Random(seed)
    starts = list(tables)
    d = model.dimension
    for _ in range(n_triples):
        a = starts[rng.randrange(len(starts))]
        table = tables[a]
        n = rng.randrange(1, table.horizon + 1)
        if table.layers[n]:
            b = rng.choice(list(table.layers[n]))
        else:
            b = tuple(0 for _ in range(d))
        lhs = table.count(b, n)
        end_side = sum(
            (s.weight * table.count(tuple(x - o for x, o in zip(b, s.offsets)), n - 1)
             for s in model.steps
             if all(x - o >= 0 for x, o in zip(b, s.offsets))),
            Fraction(0),
        )
        if end_side != lhs:
            return False
        # start side needs tables from the shifted starts
        start_side = Fraction(0)
        ok = True
        for s in model.steps:
            a2 = tuple(x + o for x, o in zip(a, s.offsets))
            if any(x < 0 for x in a2):
                continue
            if a2 not in tables:
                ok = False
                break
            start_side = start_side + s.weight * tables[a2].count(b, n - 1)
        if ok and start_side != lhs:
            return False
    return True


@dataclass
class ConvergenceRow:
    n: int
    exact: object
    predicted: object
    abs_error: object
    rel_error: object
    normalized_remainder: object


@dataclass
class ConvergenceReport:
    endpoint: tuple[int, ...]
    order: int
    c: Fraction
    rows: list[ConvergenceRow]
    slope_normalized: Optional[float]
    slope_total: Optional[float]

    @property
    def rel_errors(self):
        return [r.rel_error for r in self.rows]

    def passed(self, rel_tol=1e-2, slope_target=None, slope_tol=0.3) -> bool:
        if not self.rows:
            return False
        if self.rows[-1].rel_error >= rel_tol:
            return False
        tail = self.rows[len(self.rows) // 2 :]
        for r1, r2 in zip(tail, tail[1:]):
            if not r2.rel_error < r1.rel_error:
                return False
        if slope_target is not None:
            if self.slope_total is None or abs(self.slope_total - slope_target) > slope_tol:
                return False
        return True

    def to_csv(self) -> str:
        lines = ["n,exact,predicted,rel_error,normalized_remainder"]
        for r in self.rows:
            lines.append(
                f"{r.n},{mpmath.nstr(r.exact, 17)},{mpmath.nstr(r.predicted, 17)},"
                f"{mpmath.nstr(r.rel_error, 8)},{mpmath.nstr(r.normalized_remainder, 8)}"
            )
        return "\n".join(lines) + "\n"


def convergence_diagnostics(
    expansion,
    table: CountTable,
    endpoint,
    order: int,
    n_values: Sequence[int] | None = None,
    precision: int = 0,
) -> ConvergenceReport:
    """Compare truncated predictions against exact counts.

    Only period-compatible n (nonzero twist sum) are reported.  The
    normalized remainder is error * n^(c+M) / gamma^n; for a healthy
    expansion it decays like 1/n.
    """
    endpoint = tuple(endpoint)
    if n_values is None:
        n_values = range(1, table.horizon + 1)
    dps = max(30, precision // 3)
    gamma_num = scalar_numeric(expansion.gamma, dps)
    # required working precision: counts grow like gamma^n
    need = int(float(mpmath.log(gamma_num, 2)) * max(n_values) / 3.32) + 40
    dps = max(dps, need)
    rows = []
    with mpmath.workdps(dps):
        for n in n_values:
            if n > table.horizon:
                break
            if not expansion.twist_sum_nonzero(endpoint, n):
                continue
            exact = table.count(endpoint, n)
            if not exact:
                # count is zero although the twist sum is not: treat as
                # incompatible (can happen below the support threshold)
                continue
            predicted = expansion.evaluate(endpoint, n, order=order, dps=dps)
            exact_num = scalar_numeric(exact, dps)
            err = abs(exact_num - predicted)
            rel = err / abs(exact_num)
            gn = mpmath.mpf(n)
            norm = err * gn ** (expansion.c + order) / gamma_num ** n
            rows.append(
                ConvergenceRow(
                    n=n,
                    exact=exact_num,
                    predicted=predicted,
                    abs_error=err,
                    rel_error=rel,
                    normalized_remainder=norm,
                )
            )
    slope_norm = _fit_loglog([(r.n, r.normalized_remainder) for r in rows])
    slope_total = None
    if slope_norm is not None:
        slope_total = slope_norm - float(expansion.c + order)
    if rows and rows[-1].rel_error and rows[-1].rel_error < mpmath.mpf(10) ** (-dps // 2):
        raise PrecisionInsufficient("remainder is at working-precision noise level")
    return ConvergenceReport(
        endpoint=endpoint,
        order=order,
        c=expansion.c,
        rows=rows,
        slope_normalized=slope_norm,
        slope_total=slope_total,
    )


def _fit_loglog(points):
    pts = [(float(mpmath.log(n)), float(mpmath.log(v))) for n, v in points if v > 0]
    if len(pts) < 2:
        return None
    xbar = sum(x for x, _ in pts) / len(pts)
    ybar = sum(y for _, y in pts) / len(pts)
    sxx = sum((x - xbar) ** 2 for x, _ in pts)
    sxy = sum((x - xbar) * (y - ybar) for x, y in pts)
    if sxx == 0:
        return None
    return sxy / sxx
