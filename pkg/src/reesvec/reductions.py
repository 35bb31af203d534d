"""Complete and joint reductions with monomial data.

A complete reduction is an s x d matrix (a_ij) with a_ij in I_i; its column
products y_j = a_1j ... a_sj should satisfy (y_1, ..., y_d) F(n) = F(n + e)
from some n on. Everything here is an exact monomial-ideal equality test.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from reesvec._parallel import pmap
from reesvec.filtration import FiltrationSpec, StabilizationCertificate, evaluate, explicit_product, stabilization_bounds, stabilizes_at
from reesvec.hilbert import Certified, UpwardClosedSet, upward_region
from reesvec.monomial import (
    ArityError,
    Exponent,
    MonomialIdeal,
    add,
    box_points,
    equals,
    grlex_key,
    ideal_product,
    ideal_sum,
    minimalize,
    monomial_to_string,
    ones,
    sub,
    unit_vector,
    zero_ideal,
)


@dataclass(frozen=True)
class CompleteReductionCandidate:
    """matrix[i][j] = exponent of a_ij in I_i (s rows, d columns)."""

    matrix: tuple[tuple[Exponent, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "matrix", tuple(tuple(tuple(e) for e in row) for row in self.matrix))
        if not self.matrix or not self.matrix[0]:
            raise ValueError("empty reduction matrix")
        if len({len(row) for row in self.matrix}) != 1:
            raise ValueError("reduction matrix rows have different lengths")

    @property
    def y(self) -> tuple[Exponent, ...]:
        return tuple(tuple(map(sum, zip(*col))) for col in zip(*self.matrix))

    def y_ideal(self) -> MonomialIdeal:
        d = len(self.matrix[0][0])
        return minimalize(self.y, d)

    def validate(self, spec: FiltrationSpec) -> None:
        if len(self.matrix) != spec.s or len(self.matrix[0]) != spec.d:
            raise ArityError(f"reduction matrix must be {spec.s} x {spec.d}")
        for i, row in enumerate(self.matrix):
            for a in row:
                if len(a) != spec.d:
                    raise ArityError(f"entry {a} has arity {len(a)}, expected {spec.d}")
                if a not in spec.ideals[i]:
                    raise ValueError(f"entry {monomial_to_string(a)} is not in I_{i + 1} = {spec.ideals[i]}")

    def to_strings(self, names=None) -> list[list[str]]:
        return [[monomial_to_string(a, names) for a in row] for row in self.matrix]


def complete_reduction(spec: FiltrationSpec, matrix: Sequence[Sequence[Sequence[int]]]) -> CompleteReductionCandidate:
    cand = CompleteReductionCandidate(tuple(tuple(tuple(a) for a in row) for row in matrix))
    cand.validate(spec)
    return cand


@dataclass(frozen=True)
class JointReductionCandidate:
    """elements[i] holds the q_i exponents a_i1..a_iq_i taken from I_i."""

    elements: tuple[tuple[Exponent, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(tuple(tuple(e) for e in row) for row in self.elements))

    @property
    def q(self) -> tuple[int, ...]:
        return tuple(len(row) for row in self.elements)

    def validate(self, spec: FiltrationSpec) -> None:
        if len(self.elements) != spec.s:
            raise ArityError(f"joint reduction needs {spec.s} groups of elements")
        if sum(self.q) != spec.d:
            raise ValueError(f"type q={self.q} must have |q| = d = {spec.d}")
        for i, row in enumerate(self.elements):
            for a in row:
                if a not in spec.ideals[i]:
                    raise ValueError(f"element {monomial_to_string(a)} is not in I_{i + 1}")


def joint_reduction(spec: FiltrationSpec, elements: Sequence[Sequence[Sequence[int]]]) -> JointReductionCandidate:
    cand = JointReductionCandidate(tuple(tuple(tuple(a) for a in row) for row in elements))
    cand.validate(spec)
    return cand


# ---------------------------------------------------------------------------
# pointwise checks


def check_complete_reduction_at(spec: FiltrationSpec, cand: CompleteReductionCandidate, n: Sequence[int]) -> bool:
    """(y_1..y_d) F(n) == F(n + e)."""
    n = tuple(n)
    if any(x < 0 for x in n):
        raise ValueError(f"complete reduction vectors live in N^s, got {n}")
    lhs = ideal_product(cand.y_ideal(), evaluate(spec, n))
    return equals(lhs, evaluate(spec, add(n, ones(spec.s))))


def check_joint_reduction_at(spec: FiltrationSpec, cand: JointReductionCandidate, n: Sequence[int]) -> bool:
    """sum_i sum_j a_ij F(n - e_i) == F(n)."""
    n = tuple(n)
    total = zero_ideal(spec.d)
    for i, row in enumerate(cand.elements):
        if not row:
            continue
        below = evaluate(spec, sub(n, unit_vector(spec.s, i)))
        total = ideal_sum(total, ideal_product(minimalize(row, spec.d), below))
    return equals(total, evaluate(spec, n))


# ---------------------------------------------------------------------------
# reduction-vector sets


def reduction_vector_set(spec: FiltrationSpec, cand: CompleteReductionCandidate, box: Sequence[int],
                         certificate: StabilizationCertificate | None = None,
                         threads: int = 1) -> UpwardClosedSet:
    """Complete reduction vectors of `cand`, certified beyond the box.

    If the equality holds at n, and F(m + e_i) = I_i F(m) at m = n and
    m = n + e, then multiplying by I_i gives it at n + e_i. So validity on the
    box together with the stabilization certificate covers every n >= r.
    """
    box = tuple(box)
    cand.validate(spec)
    if certificate is None:
        certificate = stabilization_bounds(spec, box, threads)
    points = box_points(box)
    ok = pmap(lambda n: check_complete_reduction_at(spec, cand, n), points, threads)
    mins = upward_region(dict(zip(points, ok)), box)
    return UpwardClosedSet(spec.s, mins, box, (0,) * spec.s, Certified(certificate))


def propagation_failures(spec: FiltrationSpec, cand: CompleteReductionCandidate, box: Sequence[int],
                         certificate: StabilizationCertificate) -> list[tuple[tuple[int, ...], int]]:
    """Pairs (n, i) in the box where the propagation step is covered but fails."""
    e = ones(spec.s)
    out = []
    for n in box_points(box):
        if not check_complete_reduction_at(spec, cand, n):
            continue
        for i in range(spec.s):
            if certificate.covers(n, i) and stabilizes_at(spec, n, i) and stabilizes_at(spec, add(n, e), i):
                if not check_complete_reduction_at(spec, cand, add(n, unit_vector(spec.s, i))):
                    out.append((n, i))
    return out


def reduction_number(spec: FiltrationSpec, y: Sequence[Sequence[int]], box: int) -> int | None:
    """s = 1: min m with J F(n) = F(n+1) for all m <= n <= box, J = (y). None if it fails at box."""
    if spec.s != 1:
        raise ValueError("reduction numbers are for s = 1")
    J = minimalize(y, spec.d)
    r = None
    for n in range(box, -1, -1):
        if equals(ideal_product(J, evaluate(spec, (n,))), evaluate(spec, (n + 1,))):
            r = n
        else:
            break
    return r


# ---------------------------------------------------------------------------
# Nakayama descent


@dataclass
class DescentReport:
    lower: tuple[int, ...]
    box: tuple[int, ...]
    checked: int = 0
    # points where F(n) = (y)F(n-e) + F(n+e) but F(n) != (y)F(n-e), or the reverse
    violations: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"lower": list(self.lower), "box": list(self.box), "checked": self.checked,
                "violations": [list(v) for v in self.violations]}


def _descent_point(spec: FiltrationSpec, Y: MonomialIdeal, n: tuple[int, ...]) -> bool:
    e = ones(spec.s)
    here = evaluate(spec, n)
    lower = ideal_product(Y, evaluate(spec, sub(n, e)))
    with_tail = ideal_sum(lower, evaluate(spec, add(n, e)))
    return equals(with_tail, here) == equals(lower, here)


def nakayama_descent_check(spec: FiltrationSpec, y: Sequence[Sequence[int]], box: Sequence[int],
                           lower: Sequence[int] | None = None, threads: int = 1) -> DescentReport:
    """Check F(n) = (y)F(n-e) + F(n+e)  <=>  F(n) = (y)F(n-e) at every box point.

    The box defaults to start at e. F((n - e)+) is used at the boundary.
    """
    box = tuple(box)
    lower = tuple(lower) if lower is not None else ones(spec.s)
    ys = [tuple(a) for a in y]
    top = explicit_product(spec, ones(spec.s))
    for a in ys:
        if a not in top:
            raise ValueError(f"{monomial_to_string(a)} is not in I_1...I_s")
    Y = minimalize(ys, spec.d)
    points = box_points(box, lower)
    ok = pmap(lambda n: _descent_point(spec, Y, n), points, threads)
    report = DescentReport(lower, box, len(points))
    report.violations = [n for n, good in zip(points, ok) if not good]
    return report


# ---------------------------------------------------------------------------
# search


def search_complete_reductions(spec: FiltrationSpec, degree_bound: int | None = None,
                               box: Sequence[int] | None = None, cap: int = 20000,
                               threads: int = 1) -> list[CompleteReductionCandidate]:
    """Monomial complete reductions with entries among the generators of each I_i.

    Columns (one generator per I_i) are grouped by their product y; d distinct
    products are tried in graded-lex order, at most `cap` tuples. A tuple is kept
    when its reduction-vector set in `box` is nonempty.
    """
    box = tuple(box) if box is not None else (max(2, spec.d + 1),) * spec.s
    certificate = stabilization_bounds(spec, box, threads)
    by_y: dict[Exponent, tuple[Exponent, ...]] = {}
    for column in itertools.product(*(ideal.gens for ideal in spec.ideals)):
        y = tuple(map(sum, zip(*column)))
        if degree_bound is not None and sum(y) > degree_bound:
            continue
        by_y.setdefault(y, column)
    ys = sorted(by_y, key=grlex_key)
    found = []
    for k, combo in enumerate(itertools.combinations(ys, spec.d)):
        if k >= cap:
            break
        # (y) contains F(n+e), which is m-primary
        if not minimalize(combo, spec.d).is_m_primary:
            continue
        columns = [by_y[y] for y in combo]
        cand = CompleteReductionCandidate(tuple(zip(*columns)))
        if not reduction_vector_set(spec, cand, box, certificate, threads).is_empty:
            found.append(cand)
    return found


def pure_power_candidate(spec: FiltrationSpec) -> CompleteReductionCandidate:
    """Matrix whose column j holds the pure powers of X_j from each I_i."""
    rows = []
    for ideal in spec.ideals:
        rows.append(tuple(tuple(ideal.pure_power(j) if k == j else 0 for k in range(spec.d)) for j in range(spec.d)))
    return CompleteReductionCandidate(tuple(rows))


def candidate_to_dict(cand: CompleteReductionCandidate) -> dict:
    return {"matrix": [[list(a) for a in row] for row in cand.matrix], "y": [list(v) for v in cand.y]}


def candidate_from_dict(data: Mapping) -> CompleteReductionCandidate:
    return CompleteReductionCandidate(tuple(tuple(tuple(a) for a in row) for row in data["matrix"]))
