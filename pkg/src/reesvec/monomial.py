"""Monomial ideals in k[X_1, ..., X_d] represented by exponent antichains.

Exponent vectors and grading vectors are plain tuples of ints. An ideal keeps
its minimal generators in graded-lex order, so two ideals are equal exactly
when their generator tuples are equal.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from reesvec.lp import newton_membership

Exponent = tuple[int, ...]

# Largest box (number of lattice points) colength() is willing to allocate.
MAX_BOX_POINTS = 50_000_000


class ArityError(ValueError):
    """Exponent vectors or ideals of different ambient dimension were mixed."""


class InfiniteColengthError(ValueError):
    """R/A has infinite length because A is not m-primary."""


class ParseError(ValueError):
    """A monomial or ideal string could not be parsed."""


# ---------------------------------------------------------------------------
# multi-index helpers


def plus_part(n: Sequence[int]) -> tuple[int, ...]:
    return tuple(max(x, 0) for x in n)


def leq(a: Sequence[int], b: Sequence[int]) -> bool:
    """Componentwise a <= b."""
    return all(x <= y for x, y in zip(a, b))


def add(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(x - y for x, y in zip(a, b))


def unit_vector(s: int, i: int) -> tuple[int, ...]:
    return tuple(1 if j == i else 0 for j in range(s))


def ones(s: int) -> tuple[int, ...]:
    return (1,) * s


def grlex_key(g: Sequence[int]) -> tuple:
    # X^2 < XY < Y^2 < X^3 < ...: total degree first, larger leading exponent first
    return (sum(g), tuple(-x for x in g))


def box_points(upper: Sequence[int], lower: Sequence[int] | None = None) -> list[tuple[int, ...]]:
    """All lattice points of [lower, upper] in row-major order."""
    if lower is None:
        lower = (0,) * len(upper)
    ranges = [range(lo, hi + 1) for lo, hi in zip(lower, upper)]
    return [tuple(p) for p in itertools.product(*ranges)]


# ---------------------------------------------------------------------------
# ideals


def _check_arity(gens: Iterable[Sequence[int]], d: int) -> list[Exponent]:
    out = []
    for g in gens:
        g = tuple(int(x) for x in g)
        if len(g) != d:
            raise ArityError(f"exponent {g} has arity {len(g)}, expected {d}")
        if any(x < 0 for x in g):
            raise ValueError(f"exponent {g} has a negative component")
        out.append(g)
    return out


def _minimal_rows(pts: np.ndarray) -> np.ndarray:
    """Rows of pts (distinct) not dominated componentwise by another row."""
    n = len(pts)
    if n <= 1:
        return pts
    keep = np.ones(n, dtype=bool)
    chunk = max(1, 2_000_000 // (n * pts.shape[1]))
    for start in range(0, n, chunk):
        block = pts[start:start + chunk]
        # divides[a, b]: row b divides block row a
        divides = np.all(pts[None, :, :] <= block[:, None, :], axis=2)
        keep[start:start + chunk] = divides.sum(axis=1) == 1
    return pts[keep]


@dataclass(frozen=True)
class MonomialIdeal:
    """A monomial ideal given by its minimal generators in graded-lex order.

    Build instances with :func:`minimalize` (or the helpers below); the
    constructor trusts its input.
    """

    dim: int
    gens: tuple[Exponent, ...]

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("ambient dimension must be positive")

    def __len__(self) -> int:
        return len(self.gens)

    def __mul__(self, other: MonomialIdeal) -> MonomialIdeal:
        return ideal_product(self, other)

    def __add__(self, other: MonomialIdeal) -> MonomialIdeal:
        return ideal_sum(self, other)

    def __contains__(self, mono: Sequence[int]) -> bool:
        return any(leq(g, mono) for g in self.gens)

    @property
    def is_zero(self) -> bool:
        return not self.gens

    @property
    def is_unit(self) -> bool:
        return self.gens == ((0,) * self.dim,)

    @property
    def is_m_primary(self) -> bool:
        return all(self.pure_power(i) is not None for i in range(self.dim))

    def pure_power(self, axis: int) -> int | None:
        """Exponent N with X_axis^N a generator, or None."""
        for g in self.gens:
            if all(x == 0 for j, x in enumerate(g) if j != axis):
                return g[axis]
        return None

    def to_string(self, names: Sequence[str] | None = None) -> str:
        if self.is_zero:
            return "0"
        return " + ".join(monomial_to_string(g, names) for g in self.gens)

    def __str__(self) -> str:
        return "(" + ", ".join(monomial_to_string(g).replace("*", "") for g in self.gens) + ")"


def minimalize(gens: Iterable[Sequence[int]], d: int) -> MonomialIdeal:
    pts = set(_check_arity(gens, d))
    if len(pts) > 64:
        arr = _minimal_rows(np.array(sorted(pts), dtype=np.int64))
        minimal = [tuple(int(x) for x in row) for row in arr]
    else:
        ordered = sorted(pts, key=grlex_key)
        minimal = []
        for g in ordered:
            # generators of lower degree come first, so only they can divide g
            if not any(leq(h, g) for h in minimal):
                minimal.append(g)
    return MonomialIdeal(d, tuple(sorted(minimal, key=grlex_key)))


def unit_ideal(d: int) -> MonomialIdeal:
    return MonomialIdeal(d, ((0,) * d,))


def zero_ideal(d: int) -> MonomialIdeal:
    return MonomialIdeal(d, ())


def maximal_ideal(d: int) -> MonomialIdeal:
    return minimalize([unit_vector(d, i) for i in range(d)], d)


def _same_dim(a: MonomialIdeal, b: MonomialIdeal) -> int:
    if a.dim != b.dim:
        raise ArityError(f"ideals live in {a.dim} and {b.dim} variables")
    return a.dim


def ideal_product(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    d = _same_dim(a, b)
    if a.is_zero or b.is_zero:
        return zero_ideal(d)
    if len(a) * len(b) > 256:
        sums = np.unique(
            (np.array(a.gens)[:, None, :] + np.array(b.gens)[None, :, :]).reshape(-1, d), axis=0
        )
        return minimalize(map(tuple, sums.tolist()), d)
    return minimalize((add(x, y) for x in a.gens for y in b.gens), d)


def ideal_power(a: MonomialIdeal, n: int) -> MonomialIdeal:
    if n < 0:
        raise ValueError("negative ideal power")
    result = unit_ideal(a.dim)
    base = a
    while n:
        if n & 1:
            result = ideal_product(result, base)
        n >>= 1
        if n:
            base = ideal_product(base, base)
    return result


def ideal_sum(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    d = _same_dim(a, b)
    return minimalize(a.gens + b.gens, d)


def ideal_intersection(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    d = _same_dim(a, b)
    return minimalize((tuple(map(max, x, y)) for x in a.gens for y in b.gens), d)


def colon_monomial(a: MonomialIdeal, mono: Sequence[int]) -> MonomialIdeal:
    """(A : x^mono)."""
    return minimalize((tuple(max(x - y, 0) for x, y in zip(g, mono)) for g in a.gens), a.dim)


def ideal_colon(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    d = _same_dim(a, b)
    if b.is_zero:
        raise ValueError("colon by the zero ideal is rejected")
    result = None
    for g in b.gens:
        part = colon_monomial(a, g)
        result = part if result is None else ideal_intersection(result, part)
    return result


def contains(a: MonomialIdeal, b: MonomialIdeal) -> bool:
    """True iff B is a subset of A."""
    _same_dim(a, b)
    if b.is_zero:
        return True
    if a.is_zero:
        return False
    if len(a) * len(b) > 4096:
        A = np.array(a.gens)
        for start in range(0, len(b), 512):
            B = np.array(b.gens[start:start + 512])
            if not np.all(np.any(np.all(A[None, :, :] <= B[:, None, :], axis=2), axis=1)):
                return False
        return True
    return all(g in a for g in b.gens)


def equals(a: MonomialIdeal, b: MonomialIdeal) -> bool:
    _same_dim(a, b)
    return a.gens == b.gens


def colength(a: MonomialIdeal) -> int:
    """Number of standard monomials of A, counted over the pure-power box."""
    if a.is_unit:
        return 0
    if not a.is_m_primary:
        raise InfiniteColengthError(f"{a} is not m-primary; R/A has infinite length")
    shape = tuple(a.pure_power(i) for i in range(a.dim))
    size = int(np.prod(shape, dtype=object))
    if size > MAX_BOX_POINTS:
        raise MemoryError(f"staircase box {shape} has {size} points")
    inside = np.zeros(shape, dtype=bool)
    for g in a.gens:
        inside[tuple(slice(x, None) for x in g)] = True
    return size - int(inside.sum())


def colength_inclusion_exclusion(a: MonomialIdeal) -> int:
    """Colength by inclusion-exclusion over lcms of generator subsets.

    Exponential in the number of generators; meant as a cross-check.
    """
    if a.is_unit:
        return 0
    if not a.is_m_primary:
        raise InfiniteColengthError(f"{a} is not m-primary; R/A has infinite length")
    shape = [a.pure_power(i) for i in range(a.dim)]
    total = 1
    for n in shape:
        total *= n
    in_box = 0
    gens = a.gens
    for k in range(1, len(gens) + 1):
        sign = 1 if k % 2 else -1
        for subset in itertools.combinations(gens, k):
            lcm = [max(col) for col in zip(*subset)]
            count = 1
            for n, e in zip(shape, lcm):
                count *= max(n - e, 0)
            in_box += sign * count
    return total - in_box


def standard_monomials(a: MonomialIdeal) -> list[Exponent]:
    if not a.is_m_primary:
        raise InfiniteColengthError(f"{a} is not m-primary")
    upper = [a.pure_power(i) - 1 for i in range(a.dim)]
    return [p for p in box_points(upper) if p not in a]


def integral_closure(a: MonomialIdeal) -> MonomialIdeal:
    """Lattice points of the Newton polyhedron conv(gens) + R^d_{>=0}.

    Every candidate outside A is decided by an exact rational LP.
    """
    if a.is_zero:
        raise ValueError("integral closure of the zero ideal is undefined here")
    if a.is_unit or len(a) == 1:
        return a
    d = a.dim
    if a.is_m_primary:
        upper = [a.pure_power(i) - 1 for i in range(d)]
    else:
        # minimal generators of the closure lie below the coordinatewise max
        upper = [max(g[i] for g in a.gens) for i in range(d)]
    found: list[Exponent] = []
    for p in sorted(box_points(upper), key=grlex_key):
        if p in a or any(leq(q, p) for q in found):
            continue
        if newton_membership(a.gens, p):
            found.append(p)
    return minimalize(list(a.gens) + found, d)


# ---------------------------------------------------------------------------
# parsing and printing

DEFAULT_NAMES = ("X", "Y", "Z", "W")



def variable_names(d: int) -> tuple[str, ...]:
    if d <= len(DEFAULT_NAMES):
        return DEFAULT_NAMES[:d]
    return tuple(f"X{i}" for i in range(1, d + 1))


def monomial_to_string(g: Sequence[int], names: Sequence[str] | None = None) -> str:
    names = names or variable_names(len(g))
    parts = []
    for name, e in zip(names, g):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def _index_of(name: str, names: Sequence[str] | None) -> int:
    if names is not None:
        if name not in names:
            raise ParseError(f"unknown variable {name!r}; declared {list(names)}")
        return list(names).index(name)
    if name in DEFAULT_NAMES:
        return DEFAULT_NAMES.index(name)
    m = re.fullmatch(r"X(\d+)", name)
    if m and int(m.group(1)) >= 1:
        return int(m.group(1)) - 1
    raise ParseError(f"unknown variable {name!r}")


def parse_monomial(text: str, d: int | None = None, names: Sequence[str] | None = None) -> Exponent:
    """Parse "X^2*Y" style text into an exponent tuple.

    Without ``d`` the arity is the largest variable index used.
    """
    text = text.strip()
    if not text:
        raise ParseError("empty monomial")
    exps: dict[int, int] = {}
    if text != "1":
        for factor in text.split("*"):
            factor = factor.strip()
            m = re.fullmatch(r"([A-Za-z]\w*?)(?:\^(\d+))?", factor)
            if not m:
                raise ParseError(f"cannot parse factor {factor!r} in {text!r}")
            idx = _index_of(m.group(1), names)
            exps[idx] = exps.get(idx, 0) + int(m.group(2) or 1)
    if d is None:
        d = len(names) if names is not None else max(exps, default=0) + 1
    if exps and max(exps) >= d:
        raise ArityError(f"{text!r} uses more than {d} variables")
    return tuple(exps.get(i, 0) for i in range(d))


def parse_ideal(text: str, d: int | None = None, names: Sequence[str] | None = None) -> MonomialIdeal:
    """Parse "X^2 + X*Y + Y^3"; "0" is the zero ideal."""
    terms = [t for t in text.split("+")]
    if any(not t.strip() for t in terms):
        raise ParseError(f"empty generator in {text!r}")
    if len(terms) == 1 and terms[0].strip() == "0":
        if d is None:
            d = len(names) if names is not None else 1
        return zero_ideal(d)
    if d is None and names is None:
        raw = [parse_monomial(t) for t in terms]
        d = max(len(g) for g in raw)
    gens = [parse_monomial(t, d, names) for t in terms]
    return minimalize(gens, d if d is not None else len(names))


def ideal_from_exponents(rows: Sequence[Sequence[int]], d: int | None = None) -> MonomialIdeal:
    rows = [tuple(r) for r in rows]
    if d is None:
        if not rows:
            raise ValueError("cannot infer dimension of an empty exponent list")
        d = len(rows[0])
    return minimalize(rows, d)
