"""Re-parse and re-validate JSON reports written by the CLI."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

from reesvec.filtration import spec_from_dict
from reesvec.hilbert import HilbertPolynomial, HilbertTable, UpwardClosedSet, hilbert_value
from reesvec.monomial import colength, integral_closure, minimalize
from reesvec.reductions import candidate_from_dict
from reesvec.verify import CorrespondenceReport


class ReportError(ValueError):
    pass


def _require(cond: bool, message: str):
    if not cond:
        raise ReportError(message)


def validate_report(data: Mapping[str, Any]) -> Any:
    """Check an emitted report for internal consistency; returns the rebuilt object."""
    kind = data.get("kind")
    if kind == "colength":
        ideal = minimalize(data["ideal"], len(data["ideal"][0]))
        _require(colength(ideal) == data["colength"], "colength does not match the ideal")
        return ideal
    if kind == "closure":
        ideal = minimalize(data["ideal"], len(data["ideal"][0]))
        closed = minimalize(data["closure"], ideal.dim)
        _require(integral_closure(ideal) == closed, "closure does not match the ideal")
        return closed
    if kind == "hilbert_table":
        spec = spec_from_dict(data["spec"])
        values = HilbertTable.values_from_dict(data)
        for n in sorted(values)[:: max(1, len(values) // 16)]:
            _require(hilbert_value(spec, n) == values[n], f"table value at {n} is wrong")
        return values
    if kind == "polynomial":
        poly = HilbertPolynomial.from_dict(data["polynomial"])
        _require(poly.to_string() == data["display"], "display string does not match coefficients")
        return poly
    if kind == "postulation":
        HilbertPolynomial.from_dict(data["polynomial"])
        return UpwardClosedSet.from_dict(data["set"])
    if kind == "reduction_set":
        return UpwardClosedSet.from_dict(data["set"])
    if kind == "reduction_check":
        _require(isinstance(data["holds"], bool), "holds must be boolean")
        return data["holds"]
    if kind == "reduction_search":
        cands = [candidate_from_dict(c) for c in data["candidates"]]
        for c, raw in zip(cands, data["candidates"]):
            _require([list(y) for y in c.y] == raw["y"], "y does not match the matrix")
        return cands
    if kind == "descent":
        _require(data["checked"] >= len(data["violations"]), "more violations than points")
        return data["violations"]
    if kind == "correspondence":
        return CorrespondenceReport.from_dict(data)
    raise ReportError(f"unknown report kind {kind!r}")


def load_report(path: str | Path) -> Any:
    with open(path, encoding="utf-8") as fh:
        return validate_report(json.load(fh))
