import json
import subprocess
import sys

import pytest

from secantdefect import __version__
from secantdefect.catalog import CATALOG, ParamVariety, builtin
from secantdefect.cli import main, run_command
from secantdefect.curves import RationalCurveP4
from secantdefect.manifest import ManifestError, digest, emit, loads, parse_manifest

QUINTIC = {"degree": 5, "forms": ["1", "t^2", "t^3", "t^4", "t^5"]}


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_emit_round_trip(name):
    X = builtin(name)
    Y = parse_manifest(json.loads(json.dumps(emit(X))))
    assert Y.params == X.params and Y.coords == X.coords
    assert Y.tags == X.tags and Y.case == X.case and Y.expected == X.expected


def test_explicit_manifest():
    X = loads('{"name": "conic", "params": ["s"], "coords": ["1", "s", "s^2"]}')
    assert isinstance(X, ParamVariety) and (X.n, X.r) == (1, 2)


def test_combinators():
    cone = parse_manifest({"op": "cone", "k": 1, "of": {"builtin": "veronese:2:2"}})
    assert (cone.n, cone.r) == (3, 6) and "cone" in cone.tags
    proj = parse_manifest({"op": "project", "of": {"builtin": "veronese:2:2"},
                           "center": [["0", "0", "0", "0", "0", "1"]]})
    assert proj.r == 4
    j = parse_manifest({"op": "join", "of": [{"builtin": "veronese:2:2"}] * 2})
    assert j.nparams == 5
    C = parse_manifest(dict(QUINTIC, op="curve"))
    assert isinstance(C, RationalCurveP4) and C.d == 5


def test_curve_round_trip():
    C = parse_manifest(QUINTIC)
    assert parse_manifest(emit(C)).forms == C.forms


@pytest.mark.parametrize("text,fragment", [
    ('{"params": ["u"]}', "missing field 'coords'"),
    ('{"params": ["u"], "coords": ["2u"]}', "column 2"),
    ('{"params": ["1u"], "coords": ["1"]}', "identifiers"),
    ('{"op": "spin"}', "unknown op"),
    ('{"builtin": "nope"}', "unknown builtin"),
    ('{"degree": 5, "forms": ["1", "t"]}', "5 expressions"),
    ('{"degree": 5, "forms": ["1", "t", "t^2", "t^3", "t^4"]}', "curve:"),
    ('{"op": "cone", "k": 0, "of": {"builtin": "segre:2:2"}}', "positive"),
    ('[1, 2', "line 1"),
    ('{"op": "join", "of": [{"builtin": "veronese:2:2"}, {"builtin": "segre:2:2"}]}',
     "ambient mismatch"),
])
def test_manifest_errors(text, fragment):
    with pytest.raises(ManifestError) as info:
        loads(text)
    assert fragment in str(info.value)


def test_digest_is_canonical():
    assert digest({"a": 1, "b": [2]}) == digest({"b": [2], "a": 1})


def test_invariants_json():
    status, out = run_command(["invariants", "--builtin", "segre:2:2", "--seed", "7", "--json"])
    assert status == 0
    doc = json.loads(out)
    assert doc["invariants"]["s"] == 7 and doc["invariants"]["f"] == 2
    assert doc["version"] == __version__ and doc["field"] == "modp"
    assert len(doc["primes"]) == 3 and len(doc["seeds"]) == 9
    assert all(c["status"] == "pass" for c in doc["checks"])
    assert set(doc) >= {"version", "input", "field", "seeds", "primes", "invariants", "checks"}


def test_invariants_rational_field():
    status, out = run_command(["invariants", "--builtin", "veronese:2:2", "--field", "rational",
                               "--json"])
    doc = json.loads(out)
    assert status == 0 and doc["primes"] == [] and doc["invariants"]["s"] == 4


def test_curve_ranks_file(tmp_path):
    path = tmp_path / "quintic.json"
    path.write_text(json.dumps(QUINTIC))
    status, out = run_command(["curve-ranks", "--file", str(path)])
    assert status == 0
    assert "n1=7 n2=7 n3=5" in out and "FAIL" not in out
    status, out = run_command(["curve-ranks", "--file", str(path), "--json"])
    doc = json.loads(out)
    assert (doc["ranks"]["n1"], doc["ranks"]["n2"], doc["ranks"]["n3"]) == (7, 7, 5)


def test_classify_text_and_json():
    status, out = run_command(["classify", "--builtin", "segre:2:2"])
    assert status == 0 and "case (iv)" in out
    status, out = run_command(["classify", "--builtin", "segre:2:2", "--json"])
    assert json.loads(out)["classification"]["cases"] == ["iv"]


@pytest.mark.parametrize("argv", [
    ["classify", "--builtin", "fourfold-p9"],
    ["classify", "--builtin", "veronese:2:2"],
    ["invariants"],
    ["invariants", "--builtin", "nope"],
    ["invariants", "--builtin", "segre:2:2", "--primes", "0"],
    ["invariants", "--file", "/nonexistent/x.json"],
    ["curve-ranks", "--builtin", "segre:2:2"],
    ["frobnicate"],
])
def test_usage_and_rejection_exit_2(argv):
    assert run_command(argv)[0] == 2


def test_catalog_commands():
    status, out = run_command(["catalog", "list"])
    assert status == 0 and "segre:2:2" in out and "case (iv)" in out
    status, out = run_command(["catalog", "emit", "veronese:2:2"])
    assert status == 0 and json.loads(out)["coords"][0] == "x0^2"


def test_selftest():
    status, out = run_command(["selftest"])
    assert status == 0 and "FAIL" not in out and out.count("PASS") >= 5


def test_main_prints_and_returns_status(capsys):
    assert main(["classify", "--builtin", "segre:2:2"]) == 0
    assert "case (iv)" in capsys.readouterr().out
    assert main(["invariants"]) == 2
    assert "error" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "secantdefect", "catalog", "emit", "segre:2:2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["name"] == "segre:2:2"
