import itertools
import random

import numpy as np
import pytest
from hypothesis import strategies as st
from scipy.optimize import linprog

from reesvec.filtration import powers
from reesvec.monomial import ideal_power, maximal_ideal, minimalize, parse_ideal
from reesvec.reductions import complete_reduction


# --- independent oracles (no reesvec code on the decision path) -------------


def brute_in(gens, p):
    return any(all(a <= b for a, b in zip(g, p)) for g in gens)


def brute_colength(gens, d, limit=40):
    """Count points of [0, limit)^d outside the ideal, one by one."""
    return sum(1 for p in itertools.product(range(limit), repeat=d) if not brute_in(gens, p))


def brute_minimal(points):
    points = set(points)
    return sorted(p for p in points
                  if not any(q != p and all(a <= b for a, b in zip(q, p)) for q in points))


def scipy_weight(points, target):
    """max sum(lam) s.t. sum lam_k g_k <= target, lam >= 0, in floating point."""
    pts = np.array(points, dtype=float)
    res = linprog(-np.ones(len(pts)), A_ub=pts.T, b_ub=np.array(target, dtype=float),
                  bounds=[(0, None)] * len(pts), method="highs")
    if res.status == 3:
        return float("inf")
    assert res.status == 0, res.message
    return -res.fun


def lp_closure_oracle(gens, d, upper):
    """Closure generators from floating LPs over every point of [0, upper].

    Optima at small lattice points are rationals with small denominators, so a
    1e-9 tolerance cannot confuse a value just below 1 with 1 itself.
    """
    inside = [p for p in itertools.product(*(range(u + 1) for u in upper))
              if scipy_weight(gens, p) >= 1 - 1e-9]
    return brute_minimal(inside)


# --- random data -------------------------------------------------------------


def random_m_primary(rng: random.Random, d: int, max_gens: int = 6, max_power: int = 8):
    """m-primary monomial ideal with at most max_gens minimal generators."""
    while True:
        pure = [tuple(rng.randint(1, max_power) if j == i else 0 for j in range(d)) for i in range(d)]
        extra = [tuple(rng.randint(0, max_power - 1) for _ in range(d))
                 for _ in range(rng.randint(0, max_gens - d))]
        ideal = minimalize(pure + [e for e in extra if any(e)], d)
        if len(ideal) <= max_gens and ideal.is_m_primary:
            return ideal


@st.composite
def m_primary_ideals(draw, dims=(1, 2, 3), max_gens=6, max_power=6):
    d = draw(st.sampled_from(dims))
    pure = [tuple(draw(st.integers(1, max_power)) if j == i else 0 for j in range(d)) for i in range(d)]
    extra = draw(st.lists(st.tuples(*[st.integers(0, max_power - 1)] * d), max_size=max_gens - d))
    return minimalize(pure + [e for e in extra if any(e)], d)


# --- the two worked examples --------------------------------------------------

M2 = maximal_ideal(2)
M3 = maximal_ideal(3)


@pytest.fixture
def example1():
    """k[X,Y,Z], I = m, J = m^2."""
    return powers(M3, ideal_power(M3, 2))


@pytest.fixture
def example1_candidate(example1):
    return complete_reduction(example1, [[(1, 0, 0), (0, 1, 0), (0, 0, 1)],
                                         [(2, 0, 0), (0, 2, 0), (0, 0, 2)]])


@pytest.fixture
def example2():
    """k[X,Y], I = m^2, J = (X^2, Y^2)."""
    return powers(ideal_power(M2, 2), parse_ideal("X^2 + Y^2"))


@pytest.fixture
def example2_candidate(example2):
    return complete_reduction(example2, [[(2, 0), (0, 2)], [(2, 0), (0, 2)]])


# --- acceptance summary ---------------------------------------------------------

ACCEPTANCE_RESULTS: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(ACCEPTANCE_RESULTS[k])
