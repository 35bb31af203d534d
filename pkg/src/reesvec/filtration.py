"""Z^s-graded filtrations F(n) built from m-primary monomial ideals I_1..I_s.

Three families are available:

* ``powers``:  F(n) = I_1^{n_1} ... I_s^{n_s}
* ``closure``: F(n) = integral closure of the product above
* ``table``:   F(n) read from an explicit table (synthetic filtrations for tests)

Every family is evaluated at the plus-part n+, so F(n) = F(n+) always holds.
"""
from __future__ import annotations

import enum
import os
import threading
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from reesvec._parallel import pmap
from reesvec.monomial import (
    ArityError,
    MonomialIdeal,
    add,
    box_points,
    contains,
    equals,
    ideal_product,
    leq,
    minimalize,
    plus_part,
    unit_ideal,
    unit_vector,
)
from reesvec.newton import closure_of_product

DEFAULT_CACHE_SIZE = int(os.environ.get("REESVEC_CACHE_SIZE", "200000"))


class Family(str, enum.Enum):
    POWERS = "powers"
    CLOSURE = "closure"
    TABLE = "table"


class NoStabilizationError(RuntimeError):
    """F(n + e_i) = I_i F(n) still fails on the top layer of the box."""

    def __init__(self, n, axis):
        super().__init__(f"F(n+e_{axis + 1}) != I_{axis + 1} F(n) at n={n}; no stabilization inside the box")
        self.n = n
        self.axis = axis


class IdealCache:
    """Bounded memo keyed on n+. Reads are lock-free; inserts take a lock."""

    def __init__(self, maxsize: int = DEFAULT_CACHE_SIZE):
        self.maxsize = maxsize
        self._data: dict[tuple[int, ...], MonomialIdeal] = {}
        self._lock = threading.Lock()

    def get(self, key):
        return self._data.get(key)

    def put(self, key, value):
        with self._lock:
            if key not in self._data and len(self._data) >= self.maxsize:
                # oldest entry first out
                self._data.pop(next(iter(self._data)))
            self._data[key] = value

    def __len__(self):
        return len(self._data)


@dataclass(frozen=True)
class FiltrationSpec:
    ideals: tuple[MonomialIdeal, ...]
    family: Family = Family.POWERS
    table: tuple[tuple[tuple[int, ...], MonomialIdeal], ...] = ()
    cache: IdealCache = field(default_factory=IdealCache, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "ideals", tuple(self.ideals))
        object.__setattr__(self, "family", Family(self.family))
        if not self.ideals:
            raise ValueError("a filtration needs at least one ideal")
        d = self.ideals[0].dim
        for i, ideal in enumerate(self.ideals):
            if ideal.dim != d:
                raise ArityError(f"I_{i + 1} lives in {ideal.dim} variables, expected {d}")
            if not ideal.is_m_primary:
                raise ValueError(f"I_{i + 1} = {ideal} is not m-primary")
        if self.family is Family.TABLE:
            if isinstance(self.table, Mapping):
                object.__setattr__(self, "table", tuple(sorted(self.table.items())))
            for n, ideal in self.table:
                if len(n) != self.s or ideal.dim != d:
                    raise ArityError(f"table entry at {n} has the wrong shape")

    @property
    def s(self) -> int:
        return len(self.ideals)

    @property
    def d(self) -> int:
        return self.ideals[0].dim

    def __call__(self, n: Sequence[int]) -> MonomialIdeal:
        return evaluate(self, n)


def powers(*ideals: MonomialIdeal) -> FiltrationSpec:
    return FiltrationSpec(tuple(ideals), Family.POWERS)


def closures(*ideals: MonomialIdeal) -> FiltrationSpec:
    return FiltrationSpec(tuple(ideals), Family.CLOSURE)


def user_table(ideals: Sequence[MonomialIdeal], table: Mapping[Sequence[int], MonomialIdeal]) -> FiltrationSpec:
    """Synthetic filtration; evaluate() fails outside the tabulated points (F(0) defaults to R)."""
    entries = {tuple(n): ideal for n, ideal in table.items()}
    entries.setdefault((0,) * len(ideals), unit_ideal(ideals[0].dim))
    return FiltrationSpec(tuple(ideals), Family.TABLE, tuple(sorted(entries.items())))


def evaluate(spec: FiltrationSpec, n: Sequence[int]) -> MonomialIdeal:
    """F(n), computed at n+ and memoized."""
    if len(n) != spec.s:
        raise ArityError(f"grading vector {tuple(n)} has arity {len(n)}, expected {spec.s}")
    p = plus_part(n)
    hit = spec.cache.get(p)
    if hit is not None:
        return hit
    if spec.family is Family.TABLE:
        value = dict(spec.table).get(p)
        if value is None:
            raise KeyError(f"user table has no entry for n={p}")
    elif not any(p):
        value = unit_ideal(spec.d)
    elif spec.family is Family.POWERS:
        i = max(j for j, x in enumerate(p) if x > 0)
        prev = tuple(x - (j == i) for j, x in enumerate(p))
        value = ideal_product(spec.ideals[i], evaluate(spec, prev))
    else:
        value = closure_of_product(spec.ideals, p)
    spec.cache.put(p, value)
    return value


def explicit_product(spec: FiltrationSpec, n: Sequence[int]) -> MonomialIdeal:
    """prod I_i^{n_i+} by repeated multiplication, bypassing the cache."""
    result = unit_ideal(spec.d)
    for ideal, k in zip(spec.ideals, plus_part(n)):
        for _ in range(k):
            result = ideal_product(result, ideal)
    return result


# ---------------------------------------------------------------------------
# stabilization


@dataclass(frozen=True)
class StabilizationCertificate:
    """F(n + e_i) = I_i F(n) for every n in [0, verified_box] with n_i >= bounds[i]."""

    bounds: tuple[int, ...]
    verified_box: tuple[int, ...]

    def covers(self, n: Sequence[int], axis: int) -> bool:
        return n[axis] >= self.bounds[axis]

    def to_dict(self) -> dict:
        return {"bounds": list(self.bounds), "verified_box": list(self.verified_box)}

    @classmethod
    def from_dict(cls, data: Mapping) -> StabilizationCertificate:
        return cls(tuple(data["bounds"]), tuple(data["verified_box"]))


def stabilizes_at(spec: FiltrationSpec, n: Sequence[int], axis: int) -> bool:
    n = tuple(n)
    return equals(evaluate(spec, add(n, unit_vector(spec.s, axis))),
                  ideal_product(spec.ideals[axis], evaluate(spec, n)))


def stabilization_bounds(spec: FiltrationSpec, box: Sequence[int], threads: int = 1) -> StabilizationCertificate:
    box = tuple(box)
    if len(box) != spec.s:
        raise ArityError(f"box {box} has arity {len(box)}, expected {spec.s}")
    if any(b < 2 for b in box):
        raise ValueError("stabilization box must be at least 2 in every coordinate")
    points = box_points(box)
    bounds = []
    for axis in range(spec.s):
        ok = pmap(lambda n: stabilizes_at(spec, n, axis), points, threads)
        bad = [n for n, good in zip(points, ok) if not good]
        if not bad:
            bounds.append(0)
            continue
        worst = max(bad, key=lambda n: n[axis])
        if worst[axis] >= box[axis]:
            raise NoStabilizationError(worst, axis)
        bounds.append(worst[axis] + 1)
    return StabilizationCertificate(tuple(bounds), box)


# ---------------------------------------------------------------------------
# filtration axioms on a finite sample


@dataclass(frozen=True)
class AxiomViolation:
    condition: str  # "contains_power", "multiplicative" or "decreasing"
    n: tuple[int, ...]
    m: tuple[int, ...] | None = None


def check_filtration_axioms(spec: FiltrationSpec, box: Sequence[int]) -> list[AxiomViolation]:
    """Check I^n in F(n), F(n)F(m) in F(n+m), and m >= n => F(m) in F(n) on [0, box].

    Pairs whose sum leaves the box are skipped (a table may not cover them).
    """
    box = tuple(box)
    points = box_points(box)
    out = []
    for n in points:
        if not contains(evaluate(spec, n), explicit_product(spec, n)):
            out.append(AxiomViolation("contains_power", n))
    for n in points:
        for m in points:
            nm = add(n, m)
            if leq(nm, box) and not contains(evaluate(spec, nm), ideal_product(evaluate(spec, n), evaluate(spec, m))):
                out.append(AxiomViolation("multiplicative", n, m))
            if n != m and leq(n, m) and not contains(evaluate(spec, n), evaluate(spec, m)):
                out.append(AxiomViolation("decreasing", n, m))
    return out


# ---------------------------------------------------------------------------
# serialization (exponent-array form)


def spec_to_dict(spec: FiltrationSpec) -> dict:
    data = {
        "family": spec.family.value,
        "d": spec.d,
        "ideals": [[list(g) for g in ideal.gens] for ideal in spec.ideals],
    }
    if spec.family is Family.TABLE:
        data["table"] = [{"n": list(n), "ideal": [list(g) for g in ideal.gens]} for n, ideal in spec.table]
    return data


def spec_from_dict(data: Mapping) -> FiltrationSpec:
    d = int(data["d"])
    ideals = tuple(minimalize(rows, d) for rows in data["ideals"])
    family = Family(data["family"])
    if family is Family.TABLE:
        table = {tuple(entry["n"]): minimalize(entry["ideal"], d) for entry in data["table"]}
        return user_table(ideals, table)
    return FiltrationSpec(ideals, family)
