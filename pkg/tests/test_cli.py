import io
import json

import pytest

from reesvec.cli import main
from reesvec.filtration import Family
from reesvec.monomial import parse_ideal
from reesvec.project import ProjectError, dump_project, load_project, parse_project
from reesvec.reports import ReportError, load_report, validate_report


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


class TestGolden:
    def test_fit_example2(self):
        code, text = run("fit", "--project", "example2")
        assert code == 0
        assert text.splitlines()[0] == "P(r,s)=4C(r+1,2)+4C(s+1,2)+4rs-r-s"
        assert "mixed multiplicities: e(2,0)=4, e(1,1)=4, e(0,2)=4" in text

    def test_correspondence_example2(self):
        code, text = run("correspondence", "--project", "example2")
        assert code == 2
        assert "forward violation: (1, 1) in R but (0, 0) not in P" in text
        assert text.rstrip().endswith("verdict: ForwardFails")

    def test_correspondence_example1(self):
        code, text = run("correspondence", "--project", "example1")
        assert code == 0
        assert text.rstrip().endswith("verdict: Bijective")

    def test_colength(self):
        assert run("colength", "X^2+X*Y+Y^3") == (0, "ideal: X^2 + X*Y + Y^3\ncolength: 4\n")

    def test_closure(self):
        code, text = run("closure", "X^2+Y^2")
        assert code == 0 and "closure: X^2 + X*Y + Y^2" in text

    def test_hilbert_table(self):
        code, text = run("hilbert", "--project", "example2", "--box", "2,2")
        assert code == 0
        assert text.splitlines()[2].split() == ["0", "0", "4", "12"]

    def test_reduction_actions(self):
        assert run("reduction", "check", "--project", "example2", "--at", "1,1")[0] == 0
        assert run("reduction", "check", "--project", "example2", "--at", "0,0")[0] == 2
        code, text = run("reduction", "scan", "--project", "example2")
        assert code == 0 and "minimal elements: (1,1), (2,0)" in text
        code, text = run("reduction", "search", "--project", "example2")
        assert code == 0 and "y = (X^4, Y^4)" in text

    def test_descent(self):
        code, text = run("descent", "--project", "example2", "--box", "5,5")
        assert code == 0 and "0 violation(s)" in text

    def test_deterministic(self):
        assert run("correspondence", "--project", "example2") == run("correspondence", "--project", "example2")
        assert (run("postulation", "--project", "example1", "--threads", "3")
                == run("postulation", "--project", "example1"))


class TestErrors:
    def test_missing_project(self):
        assert run("fit")[0] == 1
        assert run("fit", "--project", "/nonexistent.toml")[0] == 1

    def test_bad_ideal(self):
        assert run("colength", "X^^2")[0] == 1
        assert run("colength", "X^2+X*Y")[0] == 1

    def test_bad_box_arity(self):
        assert run("hilbert", "--project", "example2", "--box", "2")[0] == 1

    def test_bad_margin(self):
        assert run("fit", "--project", "example2", "--margin", "1")[0] == 1

    def test_usage_error(self):
        with pytest.raises(SystemExit) as info:
            run("nonsense")
        assert info.value.code == 2


class TestJsonReports:
    @pytest.mark.parametrize("argv", [
        ("colength", "X^2+X*Y+Y^3"),
        ("closure", "X^2+Y^2"),
        ("hilbert", "--project", "example2", "--box", "3,3"),
        ("fit", "--project", "example1"),
        ("postulation", "--project", "example2"),
        ("reduction", "scan", "--project", "example2"),
        ("reduction", "check", "--project", "example2", "--at", "1,1"),
        ("reduction", "search", "--project", "example2"),
        ("descent", "--project", "example2"),
        ("correspondence", "--project", "example2"),
    ])
    def test_round_trip(self, tmp_path, argv):
        path = tmp_path / "report.json"
        run(*argv, "--json", str(path))
        load_report(path)

    def test_tampered_colength(self, tmp_path):
        path = tmp_path / "r.json"
        run("colength", "X^2+X*Y+Y^3", "--json", str(path))
        data = json.loads(path.read_text())
        data["colength"] = 5
        with pytest.raises(ReportError):
            validate_report(data)


EXAMPLE = """
variables = ["X", "Y"]

[ideals]
I = "X^2 + X*Y + Y^2"
J = [[2, 0], [0, 2]]

[filtration]
ideals = ["I", "J"]

[candidates.A]
matrix = [["X^2", "Y^2"], ["X^2", "Y^2"]]

[scan]
box = [4, 4]
"""


class TestProjectFiles:
    def test_parse(self):
        proj = parse_project(EXAMPLE)
        assert proj.family is Family.POWERS
        assert proj.ideals["J"] == parse_ideal("X^2 + Y^2")
        assert proj.candidates["A"].y == ((4, 0), (0, 4))
        assert proj.box == (4, 4)

    def test_dump_round_trip(self):
        proj = load_project("example1")
        again = parse_project(dump_project(proj))
        assert again.ideals == proj.ideals
        assert again.candidates == proj.candidates
        assert dump_project(again) == dump_project(proj)

    def test_table_family(self, tmp_path):
        text = """
variables = ["X", "Y"]
[ideals]
M = "X + Y"
[filtration]
ideals = ["M"]
family = "table"
[[filtration.table]]
n = [1]
ideal = "X + Y"
[[filtration.table]]
n = [2]
ideal = [[2, 0], [1, 1], [0, 2]]
"""
        proj = parse_project(text)
        assert proj.spec((2,)) == parse_ideal("X^2 + X*Y + Y^2")
        assert parse_project(dump_project(proj)).table == proj.table

    @pytest.mark.parametrize("text, where", [
        ("variables = [", "<string>"),
        ('variables = ["X"]\n[ideals]\nI = "X + Q"\n[filtration]\nideals = ["I"]', "ideals.I"),
        ('variables = ["X", "Y"]\n[ideals]\nI = "X"\n[filtration]\nideals = ["I"]', "ideals.I"),
        ('variables = ["X"]\n[ideals]\nI = "X"\n[filtration]\nideals = ["K"]', "filtration.ideals"),
        ('variables = ["X"]\n[ideals]\nI = "X"\n[filtration]\nideals = ["I"]\nfamily = "odd"',
         "filtration.family"),
        ('variables = ["X"]\n[ideals]\nI = "X^2"\n[filtration]\nideals = ["I"]\n'
         '[candidates.A]\nmatrix = [["X"]]', "candidates.A.matrix[0][0]"),
        ('variables = ["X"]\n[ideals]\nI = "X"\n[filtration]\nideals = ["I"]\n[scan]\nbox = [1, 2]',
         "scan.box"),
    ])
    def test_errors_name_the_field(self, text, where):
        with pytest.raises(ProjectError) as info:
            parse_project(text)
        assert info.value.where == where

    def test_parse_error_has_position(self):
        with pytest.raises(ProjectError) as info:
            parse_project('variables = ["X"]\nideals = [1,, 2]')
        assert "line 2" in str(info.value)
