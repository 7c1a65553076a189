"""End-to-end checks of the command line: golden bytes, exit codes, dispatch."""

import json
import os
import subprocess
import sys

import pytest

from relcone import cli, jsonio
from relcone.cech import rel_diff
from relcone.fixtures import (
    disk_area_form,
    disk_inclusion,
    fixture_registry,
    half_gerbe_cocycle,
)
from relcone.geo import group_op
from relcone.matrix import Matrix
from relcone.simplicial import identity_simplicial


def run(*argv):
    """Run the CLI in-process; returns (exit code, stdout text)."""
    import io
    from contextlib import redirect_stdout

    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli.main(list(argv))
    return code, buf.getvalue()


def emit_all(tmp_path):
    out = str(tmp_path / "fx")
    code, _ = run("fixtures", "emit", "--out", out)
    assert code == 0
    return out


def test_homology_golden_rp2(tmp_path):
    fx = emit_all(tmp_path)
    code, out = run("homology", "--ring", "Z", f"{fx}/rp2.json")
    assert code == 0
    assert out == '{"H":{"0":{"rank":1},"1":{"rank":0,"torsion":[2]},"2":{"rank":0}}}\n'


def test_compare_cones_golden(tmp_path):
    fx = emit_all(tmp_path)
    code, out = run("compare-cones", f"{fx}/fix-d2.json")
    assert code == 0
    doc = json.loads(out)
    assert doc["iso"] is True
    assert doc["degrees"]["1"] == {
        "algebraic": {"rank": 0, "torsion": [2]},
        "reduced": {"rank": 0, "torsion": [2]},
        "iso": True,
    }


def test_snf_golden():
    code, out = run("snf", "--matrix", "[[2,4],[6,8]]")
    assert code == 0
    doc = json.loads(out)
    assert doc["D"] == [[2, 0], [0, 4]]
    assert doc["rank"] == 2
    # U D V must reproduce A exactly
    from relcone.coeffs import INT

    u = Matrix.from_rows(INT, doc["U"])
    d = Matrix.from_rows(INT, doc["D"])
    v = Matrix.from_rows(INT, doc["V"])
    assert (u @ d @ v).rows == ((2, 4), (6, 8))


def test_homology_graded_input_and_degree_flag(tmp_path):
    fx = emit_all(tmp_path)
    code, out = run("cone", f"{fx}/fix-d2.json")
    assert code == 0
    cone_doc = json.loads(out)["cone"]
    path = tmp_path / "cone.json"
    path.write_text(json.dumps(cone_doc))
    code, out = run("homology", str(path), "--degree", "1")
    assert code == 0
    assert json.loads(out) == {"H": {"1": {"rank": 0, "torsion": [2]}}}


def test_cone_space_and_les_and_kercoker(tmp_path):
    fx = emit_all(tmp_path)
    code, out = run("cone-space", f"{fx}/fix-d3.json")
    assert code == 0
    doc = json.loads(out)
    assert doc["reduced"] is True
    assert doc["H"]["1"] == {"rank": 0, "torsion": [3]}

    code, out = run("les", f"{fx}/fix-d2.json")
    assert code == 0
    doc = json.loads(out)
    assert doc["exact"] is True and doc["kind"] == "cone"
    assert all(p["exact"] for p in doc["positions"])

    code, out = run("kercoker", f"{fx}/fix-d0.json")
    assert code == 0
    assert json.loads(out)["kind"] == "kercoker"


def test_cech_cover_and_cover_map(tmp_path):
    fx = emit_all(tmp_path)
    code, out = run("cech", f"{fx}/cover-circle.json")
    assert code == 0
    assert json.loads(out) == {
        "H": {"0": {"rank": 1}, "1": {"rank": 1}},
        "relative": False,
    }
    code, out = run("cech", f"{fx}/covermap-susp-d2.json", "--degree", "3")
    assert code == 0
    assert json.loads(out) == {"H": {"3": {"rank": 0, "torsion": [2]}}, "relative": True}


def test_classify_and_trivialize_verdicts(tmp_path):
    fx = emit_all(tmp_path)
    code, out = run("classify", f"{fx}/cocycle-half-gerbe.json")
    assert code == 0
    assert json.loads(out) == {
        "basis": "H^3(Phi,Z)",
        "class": [1],
        "torsion_orders": [2],
    }

    code, out = run("trivialize", f"{fx}/cocycle-half-gerbe.json")
    assert code == 2
    assert json.loads(out)["nontrivial"]["class"] == [1]


def test_trivialize_square_witness_verifies(tmp_path):
    g = half_gerbe_cocycle()
    square = group_op(g, g)
    path = tmp_path / "square.json"
    path.write_text(jsonio.dumps(jsonio.cocycle_to_json(square)))
    code, out = run("trivialize", str(path))
    assert code == 0
    witness = jsonio.rel_cochain_from_json(json.loads(out)["witness"])
    assert rel_diff(witness) == square.u


def test_integrality_and_bohr_sommerfeld(tmp_path):
    fx = emit_all(tmp_path)
    code, out = run("integrality", f"{fx}/pair-disk-area-1.json")
    assert code == 0
    assert json.loads(out)["integral"] is True

    code, out = run("integrality", f"{fx}/pair-disk-area-half.json")
    assert code == 2
    doc = json.loads(out)
    assert doc["integral"] is False
    assert doc["pairings"][0]["value"] == "1/2"

    code, out = run("bohr-sommerfeld", f"{fx}/form-disk-area-half.json")
    assert code == 2
    assert json.loads(out)["pairings"][0]["value"] == "1/2"


def test_bohr_sommerfeld_isotropy_is_an_input_error(tmp_path, capsys):
    # same form, but the map is the identity of the disk: pullback nonzero
    doc = jsonio.form_to_json(identity_simplicial(disk_inclusion().dst), disk_area_form(1))
    path = tmp_path / "bad_form.json"
    path.write_text(jsonio.dumps(doc))
    code, _ = run("bohr-sommerfeld", str(path))
    assert code == 1
    assert "pulls back" in capsys.readouterr().err


def test_parse_errors_exit_one(tmp_path, capsys):
    code, _ = run("homology", str(tmp_path / "missing.json"))
    assert code == 1
    assert "cannot read" in capsys.readouterr().err

    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    code, _ = run("homology", str(bad))
    assert code == 1
    assert "line 1" in capsys.readouterr().err

    fx = emit_all(tmp_path)
    code, _ = run("homology", "--ring", "Zmod:1", f"{fx}/rp2.json")
    assert code == 1

    code, _ = run("fixtures", "emit", "no-such-fixture", "--out", str(tmp_path / "o"))
    assert code == 1


def test_fixtures_list_names_all(tmp_path):
    code, out = run("fixtures", "list")
    assert code == 0
    listed = [e["name"] for e in json.loads(out)["fixtures"]]
    assert listed == list(fixture_registry())
    kinds = {e["kind"] for e in json.loads(out)["fixtures"]}
    assert kinds == {"complex", "map", "cover", "covermap", "cocycle", "pair", "form"}


def test_fixtures_emit_is_byte_identical(tmp_path):
    a = emit_all(tmp_path / "a")
    b = emit_all(tmp_path / "b")
    names = sorted(os.listdir(a))
    assert names == sorted(os.listdir(b))
    for name in names:
        with open(os.path.join(a, name), "rb") as fa, open(os.path.join(b, name), "rb") as fb:
            assert fa.read() == fb.read(), name


def test_out_flag_writes_report(tmp_path):
    fx = emit_all(tmp_path)
    dest = tmp_path / "report.json"
    code, out = run("homology", f"{fx}/rp2.json", "--out", str(dest))
    assert code == 0
    assert out == ""
    assert json.loads(dest.read_text())["H"]["1"]["torsion"] == [2]


def test_thread_env_does_not_change_bytes(tmp_path, monkeypatch):
    fx = emit_all(tmp_path)
    _, one = run("homology", f"{fx}/rp2.json")
    monkeypatch.setenv("RELCONE_THREADS", "4")
    _, four = run("homology", f"{fx}/rp2.json")
    assert one == four
    monkeypatch.setenv("RELCONE_THREADS", "nope")
    code, _ = run("homology", f"{fx}/rp2.json")
    assert code == 1


def test_dispatch_covers_every_verb_and_operation():
    verbs = {
        "snf", "homology", "cone", "cone-space", "compare-cones", "les",
        "kercoker", "cech", "classify", "trivialize", "integrality",
        "bohr-sommerfeld", "fixtures",
    }
    assert set(cli.DISPATCH) == verbs
    # every core library operation is reachable from some handler
    for op in (
        "snf", "homology_at", "cone_of_map", "mapping_cone_space",
        "compare_cones", "les_of_cone", "ker_coker_les",
        "cover_cochain_complex", "relative_cone_complex", "classify",
        "trivialize", "is_integral", "bohr_sommerfeld", "fixture_registry",
    ):
        assert getattr(cli, op) is not None


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "relcone.cli", "snf", "--matrix", "[[6]]"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["D"] == [[6]]
