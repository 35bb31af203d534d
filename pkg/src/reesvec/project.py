"""Project files: a TOML document describing a ring, ideals, a filtration and candidates.

    variables = ["X", "Y"]

    [ideals]
    I = "X^2 + X*Y + Y^2"         # monomial-string form
    J = [[2, 0], [0, 2]]          # exponent-array form (canonical)

    [filtration]
    ideals = ["I", "J"]
    family = "powers"             # powers | closure | table

    [candidates.A]
    matrix = [["X^2", "Y^2"], ["X^2", "Y^2"]]

    [scan]
    box = [8, 8]
    margin = 3                    # optional: fit_offset, search_cap, degree_bound

A ``table`` family lists its entries as ``[[filtration.table]]`` items with
keys ``n`` and ``ideal``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

try:
    import tomllib
except ImportError:  # Python 3.10
    import tomli as tomllib

from reesvec.filtration import Family, FiltrationSpec, user_table
from reesvec.monomial import ArityError, MonomialIdeal, ParseError, minimalize, parse_ideal, parse_monomial
from reesvec.reductions import CompleteReductionCandidate

BUNDLED = ("example1", "example2")


class ProjectError(ValueError):
    """Invalid project file; ``where`` names the offending field or position."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


@dataclass
class ProjectFile:
    variables: tuple[str, ...]
    ideals: dict[str, MonomialIdeal]
    filtration_ideals: tuple[str, ...]
    family: Family
    candidates: dict[str, CompleteReductionCandidate] = field(default_factory=dict)
    table: dict[tuple[int, ...], MonomialIdeal] = field(default_factory=dict)
    box: tuple[int, ...] | None = None
    fit_offset: tuple[int, ...] | None = None
    margin: int | None = None
    search_cap: int = 20000
    degree_bound: int | None = None
    source: str = "<string>"
    _spec: FiltrationSpec | None = field(default=None, repr=False, compare=False)

    @property
    def d(self) -> int:
        return len(self.variables)

    @property
    def spec(self) -> FiltrationSpec:
        if self._spec is None:
            ideals = tuple(self.ideals[name] for name in self.filtration_ideals)
            if self.family is Family.TABLE:
                self._spec = user_table(ideals, self.table)
            else:
                self._spec = FiltrationSpec(ideals, self.family)
        return self._spec

    def ideal(self, ref: str) -> MonomialIdeal:
        """A named ideal, or an ideal literal in the project's variables."""
        if ref in self.ideals:
            return self.ideals[ref]
        try:
            return parse_ideal(ref, self.d, self.variables)
        except (ParseError, ArityError) as exc:
            raise ProjectError("ideal", f"{ref!r} is neither a declared ideal nor parseable: {exc}") from exc


def _ideal_value(value: Any, where: str, names: tuple[str, ...]) -> MonomialIdeal:
    d = len(names)
    try:
        if isinstance(value, str):
            return parse_ideal(value, d, names)
        if isinstance(value, list) and all(isinstance(r, list) for r in value):
            if any(len(r) != d for r in value):
                raise ProjectError(where, f"exponent rows must have length {d}")
            if any(not isinstance(x, int) or x < 0 for r in value for x in r):
                raise ProjectError(where, "exponents must be nonnegative integers")
            return minimalize(value, d)
    except (ParseError, ArityError) as exc:
        raise ProjectError(where, str(exc)) from exc
    raise ProjectError(where, "expected a monomial string or a list of exponent rows")


def _monomial_value(value: Any, where: str, names: tuple[str, ...]) -> tuple[int, ...]:
    d = len(names)
    try:
        if isinstance(value, str):
            return parse_monomial(value, d, names)
        if isinstance(value, list) and len(value) == d and all(isinstance(x, int) and x >= 0 for x in value):
            return tuple(value)
    except (ParseError, ArityError) as exc:
        raise ProjectError(where, str(exc)) from exc
    raise ProjectError(where, f"expected a monomial string or {d} nonnegative exponents")


def _int_vector(value: Any, where: str, length: int | None = None) -> tuple[int, ...]:
    if not isinstance(value, list) or not all(isinstance(x, int) for x in value):
        raise ProjectError(where, "expected a list of integers")
    if length is not None and len(value) != length:
        raise ProjectError(where, f"expected {length} entries, got {len(value)}")
    return tuple(value)


def parse_project(text: str, source: str = "<string>") -> ProjectFile:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        # the parser reports "(at line L, column C)"
        raise ProjectError(source, f"parse error {exc}") from exc
    return project_from_mapping(raw, source)


def project_from_mapping(raw: Mapping[str, Any], source: str = "<string>") -> ProjectFile:
    known = {"variables", "ideals", "filtration", "candidates", "scan"}
    for key in raw:
        if key not in known:
            raise ProjectError(key, "unknown section")
    names = raw.get("variables")
    if not isinstance(names, list) or not names or not all(isinstance(v, str) and re.fullmatch(r"[A-Za-z]\w*", v) for v in names):
        raise ProjectError("variables", "expected a nonempty list of variable names")
    if len(set(names)) != len(names):
        raise ProjectError("variables", "duplicate variable name")
    names = tuple(names)

    ideals_raw = raw.get("ideals")
    if not isinstance(ideals_raw, dict) or not ideals_raw:
        raise ProjectError("ideals", "expected a table of named ideals")
    ideals = {name: _ideal_value(v, f"ideals.{name}", names) for name, v in ideals_raw.items()}

    filt = raw.get("filtration")
    if not isinstance(filt, dict):
        raise ProjectError("filtration", "missing [filtration] section")
    refs = filt.get("ideals")
    if not isinstance(refs, list) or not refs or not all(isinstance(r, str) for r in refs):
        raise ProjectError("filtration.ideals", "expected a nonempty list of ideal names")
    for r in refs:
        if r not in ideals:
            raise ProjectError("filtration.ideals", f"undeclared ideal {r!r}")
        if not ideals[r].is_m_primary:
            raise ProjectError(f"ideals.{r}", "ideal is not m-primary")
    try:
        family = Family(filt.get("family", "powers"))
    except ValueError:
        raise ProjectError("filtration.family", f"unknown family {filt.get('family')!r}") from None
    s = len(refs)
    table = {}
    if family is Family.TABLE:
        entries = filt.get("table")
        if not isinstance(entries, list):
            raise ProjectError("filtration.table", "table family needs [[filtration.table]] entries")
        for k, entry in enumerate(entries):
            where = f"filtration.table[{k}]"
            if not isinstance(entry, dict):
                raise ProjectError(where, "expected a table with keys n and ideal")
            n = _int_vector(entry.get("n"), f"{where}.n", s)
            table[n] = _ideal_value(entry.get("ideal"), f"{where}.ideal", names)

    candidates = {}
    for cname, cval in (raw.get("candidates") or {}).items():
        where = f"candidates.{cname}.matrix"
        matrix = cval.get("matrix") if isinstance(cval, dict) else None
        if not isinstance(matrix, list) or len(matrix) != s:
            raise ProjectError(where, f"expected {s} rows")
        rows = []
        for i, row in enumerate(matrix):
            if not isinstance(row, list) or len(row) != len(names):
                raise ProjectError(f"{where}[{i}]", f"expected {len(names)} entries")
            rows.append(tuple(_monomial_value(a, f"{where}[{i}][{j}]", names) for j, a in enumerate(row)))
        cand = CompleteReductionCandidate(tuple(rows))
        for i, row in enumerate(cand.matrix):
            for j, a in enumerate(row):
                if a not in ideals[refs[i]]:
                    raise ProjectError(f"{where}[{i}][{j}]", f"entry is not in {refs[i]}")
        candidates[cname] = cand

    scan = raw.get("scan") or {}
    if not isinstance(scan, dict):
        raise ProjectError("scan", "expected a table")
    for key in scan:
        if key not in {"box", "fit_offset", "margin", "search_cap", "degree_bound"}:
            raise ProjectError(f"scan.{key}", "unknown key")
    box = _int_vector(scan["box"], "scan.box", s) if "box" in scan else None
    offset = _int_vector(scan["fit_offset"], "scan.fit_offset", s) if "fit_offset" in scan else None
    for key in ("margin", "search_cap", "degree_bound"):
        if key in scan and (not isinstance(scan[key], int) or scan[key] < 0):
            raise ProjectError(f"scan.{key}", "expected a nonnegative integer")
    proj = ProjectFile(
        variables=names,
        ideals=ideals,
        filtration_ideals=tuple(refs),
        family=family,
        candidates=candidates,
        table=table,
        box=box,
        fit_offset=offset,
        margin=scan.get("margin"),
        search_cap=scan.get("search_cap", 20000),
        degree_bound=scan.get("degree_bound"),
        source=source,
    )
    try:
        proj.spec
    except (ValueError, ArityError) as exc:
        raise ProjectError("filtration", str(exc)) from exc
    return proj


def load_project(ref: str) -> ProjectFile:
    """Load a project from a path, or one of the bundled example names."""
    if ref in BUNDLED:
        text = resources.files("reesvec.projects").joinpath(f"{ref}.toml").read_text(encoding="utf-8")
        return parse_project(text, f"{ref}.toml")
    path = Path(ref)
    if not path.exists():
        raise ProjectError("--project", f"no such file {ref!r} (bundled: {', '.join(BUNDLED)})")
    return parse_project(path.read_text(encoding="utf-8"), str(path))


def _toml_value(v: Any) -> str:
    # json scalars and arrays of ints/strings are valid TOML
    return json.dumps(v)


def dump_project(proj: ProjectFile) -> str:
    """Canonical TOML text, every ideal and candidate in exponent-array form."""
    lines = [f"variables = {_toml_value(list(proj.variables))}", "", "[ideals]"]
    for name, ideal in proj.ideals.items():
        lines.append(f"{name} = {_toml_value([list(g) for g in ideal.gens])}")
    lines += ["", "[filtration]",
              f"ideals = {_toml_value(list(proj.filtration_ideals))}",
              f"family = {_toml_value(proj.family.value)}"]
    for n, ideal in sorted(proj.table.items()):
        lines += ["", "[[filtration.table]]", f"n = {_toml_value(list(n))}",
                  f"ideal = {_toml_value([list(g) for g in ideal.gens])}"]
    for name, cand in proj.candidates.items():
        lines += ["", f"[candidates.{name}]",
                  f"matrix = {_toml_value([[list(a) for a in row] for row in cand.matrix])}"]
    scan = {"box": proj.box, "fit_offset": proj.fit_offset, "margin": proj.margin,
            "search_cap": proj.search_cap, "degree_bound": proj.degree_bound}
    lines += ["", "[scan]"]
    for key, v in scan.items():
        if v is not None:
            lines.append(f"{key} = {_toml_value(list(v) if isinstance(v, tuple) else v)}")
    return "\n".join(lines) + "\n"
