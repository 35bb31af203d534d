"""Multigraded Hilbert functions and polynomials, postulation vectors.

A Hilbert polynomial of total degree d in s variables is stored in the signed
binomial basis

    P(n) = sum_{|a| <= d} (-1)^(d-|a|) e_a  prod_i C(n_i + a_i - 1, a_i)

with integer coefficients e_a. Fitting is exact linear algebra over Q on a
product grid of side d+1, followed by a check on a disjoint shifted grid.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Mapping, Sequence

from reesvec._parallel import pmap
from reesvec.filtration import Family, FiltrationSpec, NoStabilizationError, StabilizationCertificate, evaluate, stabilization_bounds
from reesvec.monomial import ArityError, add, box_points, colength, leq, ones, plus_part, sub, unit_vector


class FitError(ArithmeticError):
    pass


class SingularFitError(FitError):
    """The fit grid does not determine the coefficients."""


class FitVerificationError(FitError):
    """The fitted polynomial disagrees with the data (grid not yet asymptotic)."""

    def __init__(self, n, expected, got, reason=""):
        msg = f"fit check failed at n={n}: H={expected}, P={got}"
        super().__init__(msg + (f" ({reason})" if reason else ""))
        self.n = n
        self.expected = expected
        self.got = got


class PositivityError(FitError):
    """A mixed multiplicity came out <= 0."""


def binom(x: int, k: int) -> int:
    """C(x, k) = x(x-1)...(x-k+1)/k! for any integer x."""
    if k < 0:
        return 0
    num = 1
    for j in range(k):
        num *= x - j
    return num // factorial(k)


def exponents_up_to(s: int, degree: int) -> list[tuple[int, ...]]:
    """All a in N^s with |a| <= degree, by total degree then lex descending."""
    out = [a for a in itertools.product(range(degree + 1), repeat=s) if sum(a) <= degree]
    return sorted(out, key=lambda a: (-sum(a), tuple(-x for x in a)))


def basis_value(alpha: Sequence[int], degree: int, n: Sequence[int]) -> int:
    sign = -1 if (degree - sum(alpha)) % 2 else 1
    val = sign
    for a, x in zip(alpha, n):
        val *= binom(x + a - 1, a)
    return val


# ---------------------------------------------------------------------------
# Hilbert function


@dataclass(frozen=True)
class HilbertTable:
    spec: FiltrationSpec
    box: tuple[int, ...]
    values: Mapping[tuple[int, ...], int]
    lower: tuple[int, ...] | None = None

    def __getitem__(self, n) -> int:
        return self.values[tuple(n)]

    def to_dict(self) -> dict:
        lower = self.lower or (0,) * len(self.box)
        return {
            "s": len(self.box),
            "lower": list(lower),
            "box": list(self.box),
            "values": [self.values[n] for n in box_points(self.box, lower)],
        }

    @staticmethod
    def values_from_dict(data: Mapping) -> dict[tuple[int, ...], int]:
        points = box_points(data["box"], data["lower"])
        if len(points) != len(data["values"]):
            raise ValueError("table size does not match its box")
        return dict(zip(points, data["values"]))


def hilbert_value(spec: FiltrationSpec, n: Sequence[int]) -> int:
    """H(n) = colength of F(n)."""
    return colength(evaluate(spec, n))


def hilbert_function(spec: FiltrationSpec, box: Sequence[int], lower: Sequence[int] | None = None,
                     threads: int = 1) -> HilbertTable:
    box = tuple(box)
    if len(box) != spec.s:
        raise ArityError(f"box {box} has arity {len(box)}, expected {spec.s}")
    points = box_points(box, lower)
    # distinct plus-parts only; F(n) = F(n+)
    keys = sorted({plus_part(n) for n in points})
    vals = dict(zip(keys, pmap(lambda n: hilbert_value(spec, n), keys, threads)))
    return HilbertTable(spec, box, {n: vals[plus_part(n)] for n in points},
                        tuple(lower) if lower is not None else None)


# ---------------------------------------------------------------------------
# polynomial


@dataclass(frozen=True)
class HilbertPolynomial:
    s: int
    d: int
    coeffs: Mapping[tuple[int, ...], int]
    fit_offset: tuple[int, ...] | None = field(default=None, compare=False)
    verify_margin: int | None = field(default=None, compare=False)

    def __post_init__(self):
        coeffs = {tuple(a): int(c) for a, c in self.coeffs.items()}
        for a in exponents_up_to(self.s, self.d):
            coeffs.setdefault(a, 0)
        if any(len(a) != self.s or sum(a) > self.d or min(a) < 0 for a in coeffs):
            raise ValueError("coefficient index outside {a in N^s : |a| <= d}")
        object.__setattr__(self, "coeffs", coeffs)

    def __call__(self, n: Sequence[int]) -> int:
        if len(n) != self.s:
            raise ArityError(f"point {tuple(n)} has arity {len(n)}, expected {self.s}")
        return sum(c * basis_value(a, self.d, n) for a, c in self.coeffs.items() if c)

    def e(self, *alpha: int) -> int:
        return self.coeffs[tuple(alpha)]

    @property
    def top(self) -> dict[tuple[int, ...], int]:
        return {a: c for a, c in self.coeffs.items() if sum(a) == self.d}

    def classical_coefficients(self) -> list[int]:
        """[e_0, ..., e_d] of P(n) = sum_i (-1)^i e_i C(n+d-1-i, d-i); s = 1 only."""
        if self.s != 1:
            raise ValueError("classical Hilbert coefficients need s = 1")
        return [self.coeffs[(self.d - i,)] for i in range(self.d + 1)]

    def to_string(self, names: Sequence[str] | None = None) -> str:
        names = names or default_grading_names(self.s)
        order = sorted(self.coeffs, key=lambda a: (-sum(a), sum(1 for x in a if x), tuple(-x for x in a)))
        out = ""
        for a in order:
            c = self.coeffs[a] * (-1 if (self.d - sum(a)) % 2 else 1)
            if c == 0:
                continue
            factors = [v if k == 1 else f"C({v}+{k - 1},{k})" for v, k in zip(names, a) if k]
            body = ("*" if any(k > 1 for k in a) else "").join(factors)
            if body and abs(c) == 1:
                term = body
            else:
                term = str(abs(c)) + body
            if not out:
                out = ("-" if c < 0 else "") + term
            else:
                out += ("-" if c < 0 else "+") + term
        head = f"P({','.join(names)})="
        return head + (out or "0")

    def to_dict(self) -> dict:
        data = {
            "s": self.s,
            "d": self.d,
            "coeffs": {",".join(map(str, a)): c for a, c in sorted(self.coeffs.items())},
        }
        if self.fit_offset is not None:
            data["fit_offset"] = list(self.fit_offset)
        if self.verify_margin is not None:
            data["verify_margin"] = self.verify_margin
        return data

    @classmethod
    def from_dict(cls, data: Mapping) -> HilbertPolynomial:
        coeffs = {tuple(int(x) for x in k.split(",")): int(v) for k, v in data["coeffs"].items()}
        offset = data.get("fit_offset")
        return cls(int(data["s"]), int(data["d"]), coeffs,
                   tuple(offset) if offset is not None else None, data.get("verify_margin"))


def default_grading_names(s: int) -> tuple[str, ...]:
    if s == 1:
        return ("n",)
    if s == 2:
        return ("r", "s")
    return tuple(f"n{i}" for i in range(1, s + 1))


def solve_exact(matrix: Sequence[Sequence[int]], rhs: Sequence[int]) -> list[Fraction] | None:
    """Unique solution of a (possibly overdetermined) system over Q.

    Returns None if the system is inconsistent; raises SingularFitError if the
    solution is not unique.
    """
    nrows, ncols = len(matrix), len(matrix[0])
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    r = 0
    pivots = []
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        lead = aug[r][c]
        aug[r] = [x / lead for x in aug[r]]
        for i in range(nrows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    if any(aug[i][-1] != 0 for i in range(r, nrows)):
        return None
    if len(pivots) < ncols:
        raise SingularFitError(f"fit grid has rank {len(pivots)} < {ncols} unknowns")
    return [aug[i][-1] for i in range(ncols)]


def fit_function(values: Callable[[tuple[int, ...]], int], s: int, degree: int,
                 offset: Sequence[int], margin: int) -> HilbertPolynomial:
    """Fit a degree-`degree` polynomial in the signed binomial basis to `values`.

    The fit uses the grid offset + {0..degree}^s and is checked on the same
    grid shifted by margin*(1,...,1).
    """
    offset = tuple(offset)
    if len(offset) != s:
        raise ArityError(f"offset {offset} has arity {len(offset)}, expected {s}")
    if margin <= degree:
        raise ValueError(f"verify margin must exceed the degree ({degree}) so the grids are disjoint")
    alphas = exponents_up_to(s, degree)
    grid = [add(offset, k) for k in itertools.product(range(degree + 1), repeat=s)]
    data = [values(n) for n in grid]
    sol = solve_exact([[basis_value(a, degree, n) for a in alphas] for n in grid], data)
    if sol is None:
        # no polynomial of this degree interpolates: locate a culprit
        raise FitVerificationError(grid[0], data[0], None, "data on the fit grid is not polynomial of this degree")
    bad = [(a, c) for a, c in zip(alphas, sol) if c.denominator != 1]
    if bad:
        raise FitVerificationError(offset, None, None, f"non-integral coefficient e_{bad[0][0]} = {bad[0][1]}")
    poly = HilbertPolynomial(s, degree, {a: int(c) for a, c in zip(alphas, sol)}, offset, margin)
    check = add(offset, (margin,) * s)
    for k in itertools.product(range(degree + 1), repeat=s):
        n = add(check, k)
        h, p = values(n), poly(n)
        if h != p:
            raise FitVerificationError(n, h, p)
    if not any(poly.top.values()):
        raise FitVerificationError(offset, None, None, f"total degree below {degree}")
    return poly


def default_fit_offset(spec: FiltrationSpec) -> tuple[int, ...]:
    """(r + d + 1) e with r the largest stabilization bound on a small box."""
    if spec.family is Family.POWERS:
        r = 0
    else:
        side = max(2, spec.d + 1)
        try:
            r = max(stabilization_bounds(spec, (side,) * spec.s).bounds)
        except (NoStabilizationError, KeyError):
            r = side
    return (r + spec.d + 1,) * spec.s


def fit_polynomial(spec: FiltrationSpec, fit_offset: Sequence[int] | None = None,
                   verify_margin: int | None = None) -> HilbertPolynomial:
    offset = tuple(fit_offset) if fit_offset is not None else default_fit_offset(spec)
    margin = verify_margin if verify_margin is not None else spec.d + 1
    return fit_function(lambda n: hilbert_value(spec, n), spec.s, spec.d, offset, margin)


def fit_polynomial_retrying(spec: FiltrationSpec, fit_offset: Sequence[int] | None = None,
                            verify_margin: int | None = None, attempts: int = 4) -> HilbertPolynomial:
    """fit_polynomial, pushing the offset out by d+1 after each verification failure."""
    offset = tuple(fit_offset) if fit_offset is not None else default_fit_offset(spec)
    for k in range(attempts):
        try:
            return fit_polynomial(spec, offset, verify_margin)
        except FitVerificationError:
            if k == attempts - 1:
                raise
            offset = add(offset, (spec.d + 1,) * spec.s)
    raise AssertionError("unreachable")


def mixed_multiplicities(p: HilbertPolynomial) -> dict[tuple[int, ...], int]:
    top = p.top
    for a, c in sorted(top.items()):
        if c <= 0:
            raise PositivityError(f"mixed multiplicity e_{a} = {c} is not positive")
    return dict(sorted(top.items(), key=lambda kv: tuple(-x for x in kv[0])))


def fit_graded_difference(spec: FiltrationSpec, fit_offset: Sequence[int], verify_margin: int | None = None) -> HilbertPolynomial:
    """Fit n -> H(n+e) - H(n) = length of F(n)/F(n+e), a polynomial of total degree d-1."""
    if spec.d < 1:
        raise ValueError("need d >= 1")
    e = ones(spec.s)
    degree = spec.d - 1
    margin = verify_margin if verify_margin is not None else degree + 1
    return fit_function(lambda n: hilbert_value(spec, add(n, e)) - hilbert_value(spec, n),
                        spec.s, degree, fit_offset, margin)


# ---------------------------------------------------------------------------
# upward-closed sets


@dataclass(frozen=True)
class Certified:
    certificate: StabilizationCertificate


@dataclass(frozen=True)
class Heuristic:
    margin: int


@dataclass(frozen=True)
class UpwardClosedSet:
    """Upward-closed subset of Z^s given by its minimal elements inside a scan box."""

    arity: int
    minimal_elements: tuple[tuple[int, ...], ...]
    box: tuple[int, ...]
    lower: tuple[int, ...]
    certification: Certified | Heuristic

    def __contains__(self, n) -> bool:
        return any(leq(m, n) for m in self.minimal_elements)

    @property
    def is_empty(self) -> bool:
        return not self.minimal_elements

    def members_in_box(self) -> list[tuple[int, ...]]:
        return [n for n in box_points(self.box, self.lower) if n in self]

    def to_dict(self) -> dict:
        if isinstance(self.certification, Certified):
            cert = {"kind": "certified", **self.certification.certificate.to_dict()}
        else:
            cert = {"kind": "heuristic", "margin": self.certification.margin}
        return {
            "arity": self.arity,
            "minimal_elements": [list(m) for m in self.minimal_elements],
            "box": list(self.box),
            "lower": list(self.lower),
            "certification": cert,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> UpwardClosedSet:
        c = data["certification"]
        if c["kind"] == "certified":
            cert = Certified(StabilizationCertificate.from_dict(c))
        elif c["kind"] == "heuristic":
            cert = Heuristic(int(c["margin"]))
        else:
            raise ValueError(f"unknown certification kind {c['kind']!r}")
        mins = tuple(tuple(m) for m in data["minimal_elements"])
        out = cls(int(data["arity"]), mins, tuple(data["box"]), tuple(data["lower"]), cert)
        _check_antichain(out.minimal_elements)
        return out


def _check_antichain(elems):
    for a, b in itertools.permutations(elems, 2):
        if leq(a, b):
            raise ValueError(f"minimal elements {a} and {b} are comparable")


def upward_region(good: Mapping[tuple[int, ...], bool], box: Sequence[int],
                  lower: Sequence[int] | None = None) -> tuple[tuple[int, ...], ...]:
    """Minimal n in the box such that good(m) holds for every box point m >= n."""
    box = tuple(box)
    lower = tuple(lower) if lower is not None else (0,) * len(box)
    s = len(box)
    points = box_points(box, lower)
    member: dict[tuple[int, ...], bool] = {}
    for n in reversed(points):
        ok = good[n]
        for i in range(s):
            if ok and n[i] < box[i]:
                ok = member[add(n, unit_vector(s, i))]
        member[n] = ok
    minimal = []
    for n in points:
        if member[n] and not any(n[i] > lower[i] and member[sub(n, unit_vector(s, i))] for i in range(s)):
            minimal.append(n)
    return tuple(minimal)


def postulation_differences(spec: FiltrationSpec, p: HilbertPolynomial, box: Sequence[int],
                            lower: Sequence[int] | None = None, threads: int = 1) -> dict[tuple[int, ...], int]:
    """D(n) = P(n) - H(n) on the box."""
    table = hilbert_function(spec, box, lower, threads)
    return {n: p(n) - h for n, h in table.values.items()}


def postulation_set(spec: FiltrationSpec, p: HilbertPolynomial, box: Sequence[int],
                    lower: Sequence[int] | None = None, threads: int = 1) -> UpwardClosedSet:
    """Postulation vectors seen from the box: D vanishes on the whole cone above n inside the box.

    What happens beyond the box is only vouched for by the fit check, so the
    result is tagged Heuristic.
    """
    box = tuple(box)
    lower = tuple(lower) if lower is not None else (0,) * len(box)
    diffs = postulation_differences(spec, p, box, lower, threads)
    mins = upward_region({n: v == 0 for n, v in diffs.items()}, box, lower)
    margin = p.verify_margin if p.verify_margin is not None else 0
    return UpwardClosedSet(spec.s, mins, box, lower, Heuristic(margin))


def postulation_number(spec: FiltrationSpec, p: HilbertPolynomial, box: int | Sequence[int],
                       start: int = 0) -> int | None:
    """Largest n in [start, box] with P(n) != H(n); None when they never disagree there."""
    if spec.s != 1:
        raise ValueError("the postulation number is defined for s = 1")
    top = box if isinstance(box, int) else box[0]
    last = None
    for n in range(start, top + 1):
        if p((n,)) != hilbert_value(spec, (n,)):
            last = n
    if last == top:
        warnings.warn(f"P != H at the box edge n={top}; the box is too small", RuntimeWarning, stacklevel=2)
    return last
