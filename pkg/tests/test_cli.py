import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from cremona.cli import run
from cremona.fields import QQ
from cremona.grammar import format_point, parse_family, parse_point, parse_poly, parse_tuple

SIGMA = "[x1*x2 : x0*x2 : x0*x1]"
EX31_LINE = "[x0*(x2+x0) : x1*(x2+x0) : x2*(x2+x0)]"
TUPLE_KEYS = {"forward", "inverse", "reduced", "tuple", "lift"}
POLY_KEYS = {"cofactor", "reverse_cofactor", "jacobian"}


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv, "--json")
    assert code == 0, err
    return json.loads(out), out


def assert_reparses(doc, field=QQ, n=2):
    """Every emitted polynomial, tuple, point and rational parses back to itself."""
    if isinstance(doc, list):
        for item in doc:
            assert_reparses(item, field, n)
        return
    for k, v in doc.items():
        if isinstance(v, (dict, list)) and k != "strata":
            assert_reparses(v, field, n)
        elif k in TUPLE_KEYS:
            assert str(parse_tuple(v, field, n)) == v
        elif k in POLY_KEYS:
            assert str(parse_poly(v, field, n + 1)) == v
        elif k in ("point", "image") and v is not None:
            pt = parse_point(v, field)
            assert format_point(pt, field) == v
        elif k in ("distance_sq", "fiber_distance_sq"):
            num, den = v.split("/")
            assert str(Fraction(int(num), int(den))) in (v, num)
        elif k == "family":
            assert str(parse_family(v, field, n)) == v


class TestCheck:
    def test_sigma(self):
        doc, _ = call_json("check", "--field", "q", "--n", "2", SIGMA)
        assert doc["birational"] is True and doc["degree"] == 2
        assert doc["inverse"] == SIGMA
        assert doc["cofactor"] == "x0*x1*x2"
        assert_reparses(doc)

    def test_not_birational(self):
        doc, _ = call_json("check", "[x0^2 : x1^2 : x2^2]")
        assert doc == {"birational": False, "degree": 2}

    def test_char_two(self):
        doc, _ = call_json("check", "--field", "fp:2", SIGMA)
        assert doc["birational"] is True
        jac, _ = call_json("jacobian", "--field", "fp:2", SIGMA)
        assert jac["jacobian"] == "0"


def test_normalize_example31():
    doc, _ = call_json("normalize", "--field", "q", "--n", "2", EX31_LINE)
    assert doc["reduced"] == "[x0 : x1 : x2]"
    assert doc["cofactor"] == "x0 + x2"
    assert doc["degree"] == 1 and doc["formal_degree"] == 2
    assert_reparses(doc)


def test_degree_and_jacobian():
    doc, _ = call_json("degree", EX31_LINE)
    assert doc["degree"] == 1
    doc, _ = call_json("jacobian", SIGMA)
    assert doc["jacobian"] in ("2*x0*x1*x2", "-2*x0*x1*x2")
    assert_reparses(doc)


def test_inverse_then_compose_is_identity():
    j = "[x0^2 : x0*x1 + x2^2 : x0*x2]"
    inv, _ = call_json("inverse", j)
    assert inv["forward"] == "[x0^2 : x0*x1 - x2^2 : x0*x2]"
    comp, _ = call_json("compose", j, inv["forward"])
    assert comp["forward"] == "[x0 : x1 : x2]"
    assert comp["formal_degree"] == 4 and comp["degree"] == 1
    assert_reparses(inv)
    assert_reparses(comp)


def test_apply():
    doc, _ = call_json("apply", SIGMA, "1:0:0")
    assert doc == {"point": "(1:0:0)", "defined": False, "image": None}
    doc, _ = call_json("apply", SIGMA, "(2:1:1)")
    assert doc["image"] == "(1:2:2)"
    assert_reparses(doc)


def test_distances():
    doc, _ = call_json("dist", "--n", "1", "[x0 : 0]", "[0 : x1]")
    assert doc == {"distance_sq": "1/1"}
    doc, _ = call_json("fiber-dist", "[x0^2 : x0*x1 + x2^2 : x0*x2]", "[x0 : x1 : x2]")
    assert doc == {"fiber_distance_sq": "1/4"}
    code, out, _ = call("fiber-dist", "[x0^2 : x0*x1 + x2^2 : x0*x2]", "[x0 : x1 : x2]")
    assert code == 0 and "approx. 0.25" in out


def test_family_commands():
    doc, _ = call_json("family", "profile", "--preset", "nodal-cubic", "--phi-count", "20")
    degs = [e["degree"] for e in doc["profile"]]
    assert degs == [1] + [2] * 19
    assert doc["profile"][0] == {"point": "(0:0:1)", "degree": 1, "identity": True}
    assert_reparses({k: v for k, v in doc.items() if k != "family"})

    doc, _ = call_json("family", "lift", "--preset", "nodal-cubic-phi", "--points", "1:0;0:1")
    lifts = [e["lift"] for e in doc["lifts"]]
    assert lifts == ["[x0*x2 : x1*x2 : x2^2]", "[x0^2 : x0*x1 : x0*x2]"]

    doc, _ = call_json("family", "specialize", "--preset", "example31", "--points", "1:1:0")
    s = doc["specializations"][0]
    assert s["degree"] == 2
    assert_reparses(doc)


def test_family_text_round_trip():
    text = "[x0*(a0*x2 + a2*x0) : x1*(a0*x2 + a1*x0) : x2*(a0*x2 + a2*x0)] over {} params (a0..a2)"
    doc, _ = call_json("family", "profile", text, "--points", "1:1:1;1:2:3")
    assert [e["degree"] for e in doc["profile"]] == [1, 2]
    assert_reparses(doc)


def test_census_output_is_stable():
    argv = ("census", "enumerate", "--field", "fp:2", "--n", "2", "--d", "1")
    doc, first = call_json(*argv)
    _, second = call_json(*argv, "--partitions", "4")
    assert first == second
    assert doc["birational"] == 168 and doc["strata"] == {"1": 168}
    s1 = call_json("census", "sample", "--field", "fp:2", "--n", "2", "--d", "2",
                   "--trials", "200", "--seed", "3")[1]
    s2 = call_json("census", "sample", "--field", "fp:2", "--n", "2", "--d", "2",
                   "--trials", "200", "--seed", "3", "--partitions", "16")[1]
    assert s1 == s2
    timed, _ = call_json(*argv, "--timing")
    assert "duration_seconds" in timed


def test_repeated_runs_byte_identical():
    for argv in (("check", SIGMA), ("normalize", EX31_LINE),
                 ("family", "profile", "--preset", "example31", "--points", "1:1:0;1:2:2")):
        assert call_json(*argv)[1] == call_json(*argv)[1]


@pytest.mark.parametrize("argv, code, needle", [
    (("inverse", "[x0^2 : x1^2 : x2^2]"), 1, "not birational"),
    (("family", "specialize", "--preset", "nodal-cubic", "--points", "1:1:1"), 1, "constraint"),
    (("family", "specialize", "--preset", "example31", "--points", "0:1:0"), 1, "excluded"),
    (("dist", "--field", "fp:3", "[x0 : x1 : x2]", "[x0 : x1 : x2]"), 1, "rational"),
    (("check", "[x0 + y1 : x1 : x2]"), 2, "y"),
    (("check", "[x0 : x1^2 : x2]"), 2, "degrees"),
    (("check", "--field", "fp:4", SIGMA), 2, "prime"),
    (("check", "--n", "3", SIGMA), 2, "components"),
    (("census", "enumerate", "--field", "q", "--n", "2", "--d", "1"), 2, "prime"),
    (("census", "enumerate", "--field", "fp:3", "--n", "2", "--d", "2"), 1, "budget"),
    (("apply", SIGMA, "0:0:0"), 2, "zero"),
    (("bogus",), 2, ""),
])
def test_exit_codes(argv, code, needle):
    got, _, err = call(*argv)
    assert got == code
    assert needle in err


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "cremona", "check", "--json", SIGMA],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["inverse"] == SIGMA
