import io
import json
import subprocess
import sys

import pytest

from hhgeom import catalog, runner
from hhgeom.cli import EXIT_INVALID, EXIT_MISMATCH, EXIT_OK, main


def call(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def records(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def test_run_engel_compare():
    code, text = call("run", "--example", "engel_a", "--compare")
    assert code == EXIT_OK
    assert "compare: 31/31 pass" in text
    code, text = call("run", "--example", "engel_a", "--format", "records")
    rec = records(text)[0]
    assert rec["norm_N.1"] == pytest.approx(8, abs=1e-12)
    assert rec["tau_star.1"] == pytest.approx(-2, abs=1e-12)


def test_run_cylinder_is_flat_pseudo_hyper_kaehler():
    code, text = call("run", "--example", "cx_cylinder")
    assert code == EXIT_OK
    assert "flat: true" in text
    assert "pseudo_hyper_kaehler" in text


def test_fd_check():
    code, text = call("run", "--example", "semi_space", "--fd-check", "--format", "records")
    assert code == EXIT_OK
    for rec in records(text):
        assert rec["fd.max"] <= 1e-5


def test_explicit_points_and_grid():
    code, text = call("run", "--example", "semi_space", "--points", "1,0,0,0;2,1,1,1",
                      "--format", "records")
    recs = records(text)
    assert code == EXIT_OK and [r["point"] for r in recs] == [[1, 0, 0, 0], [2, 1, 1, 1]]
    code, text = call("run", "--example", "semi_space", "--grid", "2", "--format", "records")
    assert code == EXIT_OK and len(records(text)) == 16


def test_records_are_deterministic():
    argv = ("run", "--example", "cx_sphere", "--random", "3", "--seed", "11", "--format", "records")
    assert call(*argv) == call(*argv)


def test_invalid_inputs_exit_2(capsys):
    assert call("run", "--example", "nope")[0] == EXIT_INVALID
    assert call("run", "--example", "cylinder_pseudo", "--points=0,0,0,-1")[0] == EXIT_INVALID
    assert call("run", "--file", "/nonexistent/manifold.json")[0] == EXIT_INVALID
    assert "error:" in capsys.readouterr().err


def test_bad_point_syntax():
    with pytest.raises(SystemExit):
        call("run", "--example", "semi_space", "--points", "1,2,3")


def test_compare_mismatch_exit_1(capsys):
    code, _ = call("run", "--example", "cx_cone", "--compare")
    assert code == EXIT_MISMATCH
    assert "norm_F.3" in capsys.readouterr().err
    assert call("run", "--example", "cx_cone", "--compare", "--reference", "corrected")[0] == EXIT_OK


def test_verify_all_references():
    code, text = call("verify-all")
    assert code == EXIT_MISMATCH
    assert "9/12 examples pass against the printed reference" in text
    code, text = call("verify-all", "--reference", "corrected")
    assert code == EXIT_OK
    assert "12/12 examples pass" in text


def test_verify_all_names_a_corrupted_entry():
    data = catalog.get_data("semi_space")
    data["id"] = "semi_space_corrupt"
    data["expected"]["tau"] = "-11"
    spec = catalog.from_data(data)
    summary = runner.verify_all(specs=[spec, catalog.build("engel_b")])
    assert not summary.ok
    assert summary.passed == ["engel_b"]
    assert summary.matrix["semi_space_corrupt"]["tau"] == "FAIL"
    out = io.StringIO()
    from hhgeom.cli import render_matrix
    render_matrix(summary, out)
    assert "FAIL semi_space_corrupt" in out.getvalue()


def test_file_source(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(catalog.to_json(catalog.get_data("quarter_space")), encoding="utf-8")
    assert call("run", "--file", str(path), "--compare")[0] == EXIT_OK


def test_list_and_dump():
    code, text = call("list")
    assert code == EXIT_OK
    assert [line.split()[0] for line in text.splitlines()] == catalog.list_examples()
    code, text = call("dump", "lie_a")
    assert code == EXIT_OK and json.loads(text) == catalog.get_data("lie_a")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hhgeom", "list"], capture_output=True, text=True)
    assert proc.returncode == 0 and "semi_space" in proc.stdout
