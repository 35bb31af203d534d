"""Box-relative checks of the postulation / reduction-vector correspondence.

For a complete reduction with reduction-vector set R and postulation set P,
the shift f(n) = n + (d-1)e should map P onto {r in R : r >= (d-1)e} when the
Rees algebra has vanishing local cohomology in degrees < d. That hypothesis is
not computable here; the report records its strongest observable consequence
instead (P = H at every scanned point of N^s), labelled as a proxy.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from reesvec.filtration import FiltrationSpec, spec_from_dict, spec_to_dict
from reesvec.hilbert import (
    HilbertPolynomial,
    UpwardClosedSet,
    fit_polynomial,
    hilbert_function,
    postulation_number,
    postulation_set,
)
from reesvec.monomial import add, box_points, leq, monomial_to_string, sub
from reesvec.reductions import (
    CompleteReductionCandidate,
    candidate_from_dict,
    candidate_to_dict,
    reduction_vector_set,
)


class Verdict(str, enum.Enum):
    BIJECTIVE = "Bijective"
    FORWARD_FAILS = "ForwardFails"
    BACKWARD_FAILS = "BackwardFails"
    BOTH_FAIL = "BothFail"


def verdict_for(forward: Sequence, backward: Sequence) -> Verdict:
    if forward and backward:
        return Verdict.BOTH_FAIL
    if forward:
        return Verdict.FORWARD_FAILS
    if backward:
        return Verdict.BACKWARD_FAILS
    return Verdict.BIJECTIVE


def shift_up(n: Sequence[int], shift: Sequence[int]) -> tuple[int, ...]:
    return add(n, shift)


def shift_down(r: Sequence[int], shift: Sequence[int]) -> tuple[int, ...]:
    return sub(r, shift)


@dataclass
class CorrespondenceReport:
    spec: FiltrationSpec
    candidate: CompleteReductionCandidate
    d: int
    shift: tuple[int, ...]
    polynomial: HilbertPolynomial
    postulation: UpwardClosedSet
    reductions: UpwardClosedSet
    forward_violations: list[tuple[int, ...]]
    backward_violations: list[tuple[int, ...]]
    verdict: Verdict
    # observable stand-in for the cohomological hypothesis
    proxy_p_equals_h: bool
    s1_pattern: dict | None = field(default=None)

    def to_dict(self) -> dict:
        return {
            "kind": "correspondence",
            "spec": spec_to_dict(self.spec),
            "candidate": candidate_to_dict(self.candidate),
            "d": self.d,
            "shift": list(self.shift),
            "polynomial": self.polynomial.to_dict(),
            "postulation": self.postulation.to_dict(),
            "reductions": self.reductions.to_dict(),
            "forward_violations": [list(r) for r in self.forward_violations],
            "backward_violations": [list(n) for n in self.backward_violations],
            "verdict": self.verdict.value,
            "proxy_p_equals_h_on_box": self.proxy_p_equals_h,
            "s1_pattern": self.s1_pattern,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> CorrespondenceReport:
        """Rebuild and re-validate an emitted report."""
        if data.get("kind") != "correspondence":
            raise ValueError("not a correspondence report")
        spec = spec_from_dict(data["spec"])
        cand = candidate_from_dict(data["candidate"])
        cand.validate(spec)
        report = cls(
            spec=spec,
            candidate=cand,
            d=int(data["d"]),
            shift=tuple(data["shift"]),
            polynomial=HilbertPolynomial.from_dict(data["polynomial"]),
            postulation=UpwardClosedSet.from_dict(data["postulation"]),
            reductions=UpwardClosedSet.from_dict(data["reductions"]),
            forward_violations=[tuple(r) for r in data["forward_violations"]],
            backward_violations=[tuple(n) for n in data["backward_violations"]],
            verdict=Verdict(data["verdict"]),
            proxy_p_equals_h=bool(data["proxy_p_equals_h_on_box"]),
            s1_pattern=data.get("s1_pattern"),
        )
        report.validate()
        return report

    def validate(self) -> None:
        if self.d != self.spec.d or self.shift != ((self.d - 1),) * self.spec.s:
            raise ValueError("shift does not equal (d-1)e")
        if self.verdict is not verdict_for(self.forward_violations, self.backward_violations):
            raise ValueError("verdict is inconsistent with the violation lists")
        box = self.reductions.box
        for v in self.forward_violations + self.backward_violations:
            if not leq((0,) * len(box), v) or not leq(v, box):
                raise ValueError(f"violation {v} lies outside the scan box")

    def to_table(self) -> str:
        names = None
        lines = [
            f"d = {self.d}, shift f(n) = n + {self.shift}",
            f"candidate y = ({', '.join(monomial_to_string(y, names).replace('*', '') for y in self.candidate.y)})",
            f"Hilbert polynomial: {self.polynomial.to_string()}",
            f"postulation vectors (heuristic, box {self.postulation.box}): minimal {_fmt(self.postulation.minimal_elements)}",
            f"reduction vectors (certified, box {self.reductions.box}): minimal {_fmt(self.reductions.minimal_elements)}",
            f"proxy P = H on scanned N^s box: {'yes' if self.proxy_p_equals_h else 'no'}",
        ]
        for r in self.forward_violations:
            lines.append(f"forward violation: {r} in R but {shift_down(r, self.shift)} not in P")
        for n in self.backward_violations:
            lines.append(f"backward violation: {n} in P but {shift_up(n, self.shift)} not in R")
        if self.s1_pattern is not None:
            p = self.s1_pattern
            lines.append(f"s=1 pattern r = n + d: r={p['reduction_number']}, n={p['postulation_number']}, "
                         f"d={self.d}: {'holds' if p['holds'] else 'fails'}")
        lines.append(f"verdict: {self.verdict.value}")
        return "\n".join(lines)


def _fmt(elems) -> str:
    return "{" + ", ".join(str(tuple(e)) for e in elems) + "}" if elems else "{} (empty)"


def p_equals_h_on_box(spec: FiltrationSpec, p: HilbertPolynomial, box: Sequence[int], threads: int = 1) -> bool:
    table = hilbert_function(spec, box, threads=threads)
    return all(p(n) == h for n, h in table.values.items())


def verify_correspondence(spec: FiltrationSpec, cand: CompleteReductionCandidate, box: Sequence[int],
                          p: HilbertPolynomial | None = None, threads: int = 1) -> CorrespondenceReport:
    box = tuple(box)
    d = spec.d
    if p is None:
        p = fit_polynomial(spec)
    shift = (d - 1,) * spec.s
    post = postulation_set(spec, p, box, threads=threads)
    red = reduction_vector_set(spec, cand, box, threads=threads)
    points = box_points(box)
    forward = [r for r in points if r in red and leq(shift, r) and shift_down(r, shift) not in post]
    # membership in R beyond the box is certified, so n + shift may leave it
    backward = [n for n in points if n in post and shift_up(n, shift) not in red]
    s1 = None
    if spec.s == 1 and not red.is_empty:
        r = red.minimal_elements[0][0]
        # P has at most d roots, so one of -(d+1)..-1 disagrees with H = 0
        n = postulation_number(spec, p, box[0], start=-(d + 1))
        s1 = {"reduction_number": r, "postulation_number": n, "holds": n is not None and r == n + d}
    return CorrespondenceReport(
        spec=spec,
        candidate=cand,
        d=d,
        shift=shift,
        polynomial=p,
        postulation=post,
        reductions=red,
        forward_violations=forward,
        backward_violations=backward,
        verdict=verdict_for(forward, backward),
        proxy_p_equals_h=p_equals_h_on_box(spec, p, box, threads),
        s1_pattern=s1,
    )


def verify_cm_vanishing_proxy(spec: FiltrationSpec, box: Sequence[int], p: HilbertPolynomial | None = None,
                              threads: int = 1) -> bool:
    """P(n) = H(n) at every point of [0, box]."""
    if p is None:
        p = fit_polynomial(spec)
    return p_equals_h_on_box(spec, p, box, threads)
