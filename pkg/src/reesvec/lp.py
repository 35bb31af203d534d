"""Exact rational simplex for Newton-polyhedron membership.

A point p lies in conv(G) + R^d_{>=0} iff some convex combination of the
points of G is <= p. Because G is nonnegative this is the same as asking
whether

    maximize  sum(lam)   subject to  sum_k lam_k g_k <= p,  lam >= 0

reaches 1 (scale an optimal lam down to a convex combination). The slack basis
is feasible from the start, so no phase one is needed.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class Unbounded(Exception):
    pass


def maximize_total_weight(points: Sequence[Sequence[int]], target: Sequence[int],
                          stop_at: Fraction | None = None) -> tuple[Fraction, list[Fraction]]:
    """Solve the LP above exactly.

    Returns the optimum and an optimal weight vector. Raises Unbounded when a
    zero point is present. If ``stop_at`` is given the search halts as soon as
    the objective reaches it (the returned value is then a lower bound).
    """
    d = len(target)
    k = len(points)
    if any(x < 0 for x in target):
        return Fraction(0), [Fraction(0)] * k
    ncols = k + d
    # rows[i] = coefficients over (lam_0..lam_{k-1}, slack_0..slack_{d-1}) + [rhs]
    rows = []
    for i in range(d):
        row = [Fraction(p[i]) for p in points] + [Fraction(int(i == j)) for j in range(d)]
        row.append(Fraction(target[i]))
        rows.append(row)
    # reduced costs (objective row), value kept separately
    cost = [Fraction(1)] * k + [Fraction(0)] * d
    value = Fraction(0)
    basis = list(range(k, k + d))

    stalled = 0
    while True:
        if stop_at is not None and value >= stop_at:
            break
        if stalled < 2 * ncols:
            # Dantzig pricing until degeneracy drags on, then Bland (cannot cycle)
            entering = max(range(ncols), key=cost.__getitem__)
            if cost[entering] <= 0:
                break
        else:
            entering = next((j for j in range(ncols) if cost[j] > 0), None)
            if entering is None:
                break
        best = None
        leaving = None
        for i, row in enumerate(rows):
            a = row[entering]
            if a > 0:
                ratio = row[-1] / a
                # Bland: smallest ratio, ties broken by smallest basic index
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    best, leaving = ratio, i
        if leaving is None:
            raise Unbounded()
        piv_row = rows[leaving]
        piv = piv_row[entering]
        if piv != 1:
            piv_row = [x / piv for x in piv_row]
            rows[leaving] = piv_row
        for i, row in enumerate(rows):
            if i != leaving:
                f = row[entering]
                if f:
                    rows[i] = [x - f * y for x, y in zip(row, piv_row)]
        f = cost[entering]
        stalled = stalled + 1 if piv_row[-1] == 0 else 0
        value += f * piv_row[-1]
        cost = [c - f * y for c, y in zip(cost, piv_row[:-1])]
        basis[leaving] = entering

    weights = [Fraction(0)] * k
    for i, b in enumerate(basis):
        if b < k:
            weights[b] = rows[i][-1]
    return value, weights


def newton_membership(points: Sequence[Sequence[int]], target: Sequence[int]) -> bool:
    """Exact test of target in conv(points) + R^d_{>=0}."""
    if not points:
        return False
    try:
        value, _ = maximize_total_weight(points, target, stop_at=Fraction(1))
    except Unbounded:
        return True
    return value >= 1
