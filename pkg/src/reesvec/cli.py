"""Command-line front end.

Exit status: 0 on success, 2 when a mathematical check reports violations
(correspondence not bijective, descent counterexamples, failed reduction
check, empty reduction set or search), 1 on input or computation errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from reesvec import __version__
from reesvec.filtration import NoStabilizationError, spec_to_dict
from reesvec.hilbert import (
    FitError,
    HilbertPolynomial,
    hilbert_function,
    mixed_multiplicities,
    postulation_set,
)
from reesvec.hilbert import fit_polynomial as _fit
from reesvec.monomial import (
    ArityError,
    InfiniteColengthError,
    ParseError,
    colength,
    integral_closure,
    monomial_to_string,
    parse_ideal,
)
from reesvec.project import ProjectError, ProjectFile, load_project
from reesvec.reductions import (
    candidate_to_dict,
    check_complete_reduction_at,
    nakayama_descent_check,
    reduction_vector_set,
    search_complete_reductions,
)
from reesvec.verify import Verdict, verify_correspondence

VIOLATIONS = 2
INPUT_ERROR = 1


def _vector(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--project", help="project file, or a bundled name (example1, example2)")
    common.add_argument("--json", metavar="PATH", help="also write a JSON report here")
    common.add_argument("--threads", type=_positive, default=1, help="worker threads for box scans")

    parser = argparse.ArgumentParser(prog="reesvec", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("colength", parents=[common], help="length of R/A")
    p.add_argument("ideal", help="declared ideal name or literal such as 'X^2+X*Y+Y^3'")
    p = sub.add_parser("closure", parents=[common], help="integral closure of a monomial ideal")
    p.add_argument("ideal")

    p = sub.add_parser("hilbert", parents=[common], help="Hilbert function table on [0, box]")
    p.add_argument("--box", type=_vector)

    for name, text in (("fit", "fit the Hilbert polynomial"), ("postulation", "postulation vectors in a box")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--offset", type=_vector)
        p.add_argument("--margin", type=int)
        if name == "postulation":
            p.add_argument("--box", type=_vector)

    p = sub.add_parser("reduction", parents=[common], help="complete reductions")
    p.add_argument("action", choices=["check", "scan", "search"])
    p.add_argument("--candidate", help="candidate name from the project (default: the first)")
    p.add_argument("--at", type=_vector, help="grading vector for 'check'")
    p.add_argument("--box", type=_vector)
    p.add_argument("--cap", type=int, help="maximum tuples examined by 'search'")
    p.add_argument("--degree-bound", type=int)

    p = sub.add_parser("descent", parents=[common], help="Nakayama descent check on [e, box]")
    p.add_argument("--candidate")
    p.add_argument("--box", type=_vector)

    p = sub.add_parser("correspondence", parents=[common], help="postulation vs reduction vectors")
    p.add_argument("--candidate")
    p.add_argument("--box", type=_vector)
    p.add_argument("--offset", type=_vector)
    p.add_argument("--margin", type=int)
    return parser


class _Run:
    def __init__(self, args, out):
        self.args = args
        self.out = out
        self.project: ProjectFile | None = load_project(args.project) if args.project else None

    def need_project(self) -> ProjectFile:
        if self.project is None:
            raise ProjectError("--project", f"'{self.args.command}' needs a project file")
        return self.project

    def box(self) -> tuple[int, ...]:
        proj = self.need_project()
        box = getattr(self.args, "box", None) or proj.box
        if box is None:
            raise ProjectError("--box", "no box given and the project has no scan.box")
        if len(box) != proj.spec.s:
            raise ProjectError("--box", f"expected {proj.spec.s} entries")
        return box

    def candidate(self):
        proj = self.need_project()
        if not proj.candidates:
            raise ProjectError("candidates", "the project declares no candidates")
        name = self.args.candidate or next(iter(proj.candidates))
        if name not in proj.candidates:
            raise ProjectError("--candidate", f"unknown candidate {name!r}")
        return name, proj.candidates[name]

    def ideal(self, ref: str):
        if self.project is not None:
            return self.project.ideal(ref)
        return parse_ideal(ref)

    def names(self):
        return self.project.variables if self.project else None

    def fit(self) -> HilbertPolynomial:
        proj = self.need_project()
        offset = getattr(self.args, "offset", None) or proj.fit_offset
        margin = getattr(self.args, "margin", None)
        if margin is None:
            margin = proj.margin
        return _fit(proj.spec, offset, margin)

    def print(self, line: str = ""):
        print(line, file=self.out)


def _vec(v) -> str:
    return "(" + ",".join(map(str, v)) + ")"


def _cmd_colength(run: _Run):
    ideal = run.ideal(run.args.ideal)
    n = colength(ideal)
    run.print(f"ideal: {ideal.to_string(run.names())}")
    run.print(f"colength: {n}")
    return 0, {"kind": "colength", "ideal": [list(g) for g in ideal.gens], "colength": n}


def _cmd_closure(run: _Run):
    ideal = run.ideal(run.args.ideal)
    closed = integral_closure(ideal)
    run.print(f"ideal:   {ideal.to_string(run.names())}")
    run.print(f"closure: {closed.to_string(run.names())}")
    return 0, {"kind": "closure", "ideal": [list(g) for g in ideal.gens],
               "closure": [list(g) for g in closed.gens], "integrally_closed": closed == ideal}


def _cmd_hilbert(run: _Run):
    proj = run.need_project()
    table = hilbert_function(proj.spec, run.box(), threads=run.args.threads)
    _print_table(run, table)
    return 0, {"kind": "hilbert_table", "spec": spec_to_dict(proj.spec), **table.to_dict()}


def _print_table(run: _Run, table):
    box = table.box
    if len(box) == 1:
        run.print("n  H(n)")
        for n in range(box[0] + 1):
            run.print(f"{n}  {table[(n,)]}")
    elif len(box) == 2:
        width = max(len(str(v)) for v in table.values.values()) + 1
        run.print("H(r,s)  rows r, columns s")
        run.print("     " + "".join(f"{c:>{width}}" for c in range(box[1] + 1)))
        for r in range(box[0] + 1):
            run.print(f"{r:>4} " + "".join(f"{table[(r, c)]:>{width}}" for c in range(box[1] + 1)))
    else:
        for n, v in sorted(table.values.items()):
            run.print(f"{_vec(n)}  {v}")


def _cmd_fit(run: _Run):
    proj = run.need_project()
    p = run.fit()
    run.print(p.to_string())
    for a, c in sorted(p.coeffs.items(), key=lambda kv: (-sum(kv[0]), tuple(-x for x in kv[0]))):
        run.print(f"e{_vec(a)} = {c}")
    mixed = mixed_multiplicities(p)
    run.print("mixed multiplicities: " + ", ".join(f"e{_vec(a)}={c}" for a, c in mixed.items()))
    return 0, {"kind": "polynomial", "spec": spec_to_dict(proj.spec), "polynomial": p.to_dict(),
               "display": p.to_string()}


def _cmd_postulation(run: _Run):
    proj = run.need_project()
    p = run.fit()
    box = run.box()
    post = postulation_set(proj.spec, p, box, threads=run.args.threads)
    run.print(p.to_string())
    run.print(f"postulation vectors in box {_vec(box)} (heuristic tail, margin {post.certification.margin}):")
    run.print("minimal elements: " + (", ".join(_vec(m) for m in post.minimal_elements) or "none"))
    return 0, {"kind": "postulation", "polynomial": p.to_dict(), "set": post.to_dict()}


def _cmd_reduction(run: _Run):
    proj = run.need_project()
    spec = proj.spec
    action = run.args.action
    if action == "search":
        box = run.args.box or None
        cap = run.args.cap if run.args.cap is not None else proj.search_cap
        bound = run.args.degree_bound if run.args.degree_bound is not None else proj.degree_bound
        found = search_complete_reductions(spec, bound, box, cap, run.args.threads)
        run.print(f"{len(found)} monomial complete reduction(s)")
        for cand in found:
            rows = cand.to_strings(run.names())
            ys = ", ".join(monomial_to_string(y, run.names()) for y in cand.y)
            run.print(f"  matrix {rows}  y = ({ys})")
        return (0 if found else VIOLATIONS), {
            "kind": "reduction_search", "candidates": [candidate_to_dict(c) for c in found]}
    name, cand = run.candidate()
    if action == "check":
        n = run.args.at
        if n is None or len(n) != spec.s:
            raise ProjectError("--at", f"'reduction check' needs --at with {spec.s} entries")
        ok = check_complete_reduction_at(spec, cand, n)
        run.print(f"(y)F{_vec(n)} = F{_vec(n)}+e: {'holds' if ok else 'fails'}")
        return (0 if ok else VIOLATIONS), {"kind": "reduction_check", "candidate": name,
                                           "n": list(n), "holds": ok}
    box = run.box()
    red = reduction_vector_set(spec, cand, box, threads=run.args.threads)
    cert = red.certification.certificate
    run.print(f"complete reduction vectors of {name} (box {_vec(box)}, certified by stabilization bounds {_vec(cert.bounds)}):")
    run.print("minimal elements: " + (", ".join(_vec(m) for m in red.minimal_elements) or "none"))
    return (0 if not red.is_empty else VIOLATIONS), {"kind": "reduction_set", "candidate": name, "set": red.to_dict()}


def _cmd_descent(run: _Run):
    proj = run.need_project()
    name, cand = run.candidate()
    box = run.box()
    report = nakayama_descent_check(proj.spec, cand.y, box, threads=run.args.threads)
    run.print(f"descent check for {name} on [{_vec(report.lower)}, {_vec(box)}]: "
              f"{report.checked} points, {len(report.violations)} violation(s)")
    for n in report.violations:
        run.print(f"  violation at {_vec(n)}")
    return (0 if report.ok else VIOLATIONS), {"kind": "descent", "candidate": name, **report.to_dict()}


def _cmd_correspondence(run: _Run):
    proj = run.need_project()
    _, cand = run.candidate()
    report = verify_correspondence(proj.spec, cand, run.box(), p=run.fit(), threads=run.args.threads)
    run.print(report.to_table())
    code = 0 if report.verdict is Verdict.BIJECTIVE else VIOLATIONS
    return code, report.to_dict()


COMMANDS = {
    "colength": _cmd_colength,
    "closure": _cmd_closure,
    "hilbert": _cmd_hilbert,
    "fit": _cmd_fit,
    "postulation": _cmd_postulation,
    "reduction": _cmd_reduction,
    "descent": _cmd_descent,
    "correspondence": _cmd_correspondence,
}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        run = _Run(args, out)
        code, report = COMMANDS[args.command](run)
    except (ProjectError, ParseError, ArityError, InfiniteColengthError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except (FitError, NoStabilizationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
