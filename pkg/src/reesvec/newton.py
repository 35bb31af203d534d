"""Newton polyhedra of monomial ideals as exact integer inequality systems.

The Newton polyhedron conv(G) + R^d_{>=0} is cut out by finitely many
inequalities w.x >= c with w >= 0. Vertices are certified with the exact LP;
candidate facets come from hyperplanes through vertices and coordinate rays.
Keeping every valid candidate (not only facets) is harmless.

Closures of products reuse the normals: NP(I_1^{n_1}...I_s^{n_s}) is the
Minkowski sum of the n_i NP(I_i), whose normal fan does not depend on the
positive weights n_i, and whose support function is additive.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from math import gcd
from typing import Sequence

import numpy as np

from reesvec.lp import newton_membership
from reesvec.monomial import MonomialIdeal, ideal_product, minimalize, unit_ideal, unit_vector

Inequality = tuple[tuple[int, ...], int]


def _det(rows: list[list[int]]) -> int:
    """Integer determinant by Bareiss elimination."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _normal(directions: list[tuple[int, ...]], d: int) -> tuple[int, ...]:
    """Integer vector orthogonal to d-1 directions (generalized cross product)."""
    w = []
    for j in range(d):
        minor = [[v[c] for c in range(d) if c != j] for v in directions]
        w.append((-1) ** j * _det(minor))
    g = 0
    for x in w:
        g = gcd(g, x)
    return tuple(x // g for x in w) if g else tuple(w)


def newton_vertices(gens: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Generators that are vertices of the Newton polyhedron."""
    gens = [tuple(g) for g in gens]
    return [g for i, g in enumerate(gens)
            if not newton_membership(gens[:i] + gens[i + 1:], g)]


@lru_cache(maxsize=1024)
def _inequalities(gens: tuple[tuple[int, ...], ...]) -> tuple[Inequality, ...]:
    d = len(gens[0])
    verts = newton_vertices(gens)
    rays = [unit_vector(d, j) for j in range(d)]
    found: set[Inequality] = set()
    for k in range(1, d + 1):
        for vs in itertools.combinations(verts, k):
            for rs in itertools.combinations(rays, d - k):
                dirs = [tuple(a - b for a, b in zip(v, vs[0])) for v in vs[1:]] + list(rs)
                w = _normal(dirs, d)
                if all(x <= 0 for x in w):
                    w = tuple(-x for x in w)
                if not any(w) or any(x < 0 for x in w):
                    continue
                c = sum(a * b for a, b in zip(w, vs[0]))
                if all(sum(a * b for a, b in zip(w, v)) >= c for v in verts):
                    found.add((w, c))
    return tuple(sorted(found))


def newton_inequalities(ideal: MonomialIdeal) -> tuple[Inequality, ...]:
    """Inequalities (w, c) with NP(ideal) = {x : w.x >= c for all}."""
    if ideal.is_zero:
        raise ValueError("the zero ideal has no Newton polyhedron")
    return _inequalities(ideal.gens)


def support_value(ideal: MonomialIdeal, w: Sequence[int]) -> int:
    return min(sum(a * b for a, b in zip(w, g)) for g in ideal.gens)


def _lattice_points_ideal(ineqs: Sequence[Inequality], upper: Sequence[int], d: int) -> MonomialIdeal:
    shape = tuple(u + 1 for u in upper)
    grids = np.indices(shape, dtype=np.int64)
    inside = np.ones(shape, dtype=bool)
    for w, c in ineqs:
        val = sum(int(wj) * grids[j] for j, wj in enumerate(w) if wj)
        inside &= val >= c
    minimal = inside.copy()
    for j in range(d):
        below = np.zeros(shape, dtype=bool)
        src = [slice(None)] * d
        dst = [slice(None)] * d
        src[j] = slice(0, -1)
        dst[j] = slice(1, None)
        below[tuple(dst)] = inside[tuple(src)]
        minimal &= ~below
    pts = [tuple(int(x) for x in p) for p in np.argwhere(minimal)]
    return minimalize(pts, d)


def closure_of_product(ideals: Sequence[MonomialIdeal], n: Sequence[int]) -> MonomialIdeal:
    """Integral closure of prod ideals[i]^n[i] for n >= 0, via shared facet normals."""
    d = ideals[0].dim
    support = [i for i, k in enumerate(n) if k > 0]
    if not support:
        return unit_ideal(d)
    base = ideals[support[0]]
    for i in support[1:]:
        base = ideal_product(base, ideals[i])
    normals = [w for w, _ in newton_inequalities(base)]
    ineqs = [(w, sum(n[i] * support_value(ideals[i], w) for i in support)) for w in normals]
    upper = []
    for j in range(d):
        powers = [ideals[i].pure_power(j) for i in support]
        if any(p is None for p in powers):
            raise ValueError("closure_of_product needs m-primary ideals")
        upper.append(sum(n[i] * p for i, p in zip(support, powers)))
    return _lattice_points_ideal(ineqs, upper, d)
