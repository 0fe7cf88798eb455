import json

import pytest

from pleijel_lab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_constants(capsys):
    code, out = run(capsys, "constants", "--dim", "2")
    assert code == 0
    assert out.out.splitlines()[2].startswith("2,3.14159265359,")


def test_probe(capsys):
    code, out = run(capsys, "potential", "probe", "--potential", "coulomb", "--dim", "3", "--lambda", "-0.01")
    assert code == 0
    assert "# r_lambda=100" in out.out and "# hardy_radius=0.25" in out.out


def test_spectrum_radial(capsys):
    code, out = run(capsys, "spectrum", "radial", "--ell", "1", "--cutoff", "13")
    rows = out.out.splitlines()[2:]
    assert code == 0 and [r.split(",")[4] for r in rows] == ["0", "1", "2"]


def test_spectrum_table_json(capsys):
    code, out = run(capsys, "spectrum", "table", "--cutoff", "9", "--json")
    doc = json.loads(out.out)
    assert code == 0 and [lev["multiplicity"] for lev in doc["levels"]] == [1, 2, 3, 4]


def test_weyl_json(capsys):
    code, out = run(capsys, "weyl", "--lambda", "10", "--format", "json")
    assert code == 0 and json.loads(out.out)["rows"][0][1] == pytest.approx(12.5)


def test_nodal_count(capsys):
    code, out = run(capsys, "nodal", "count", "--n", "3", "--ell", "2", "--m", "-2")
    header, row = out.out.splitlines()[1:3]
    rec = dict(zip(header.split(","), row.split(",")))
    assert code == 0 and rec["mu"] == rec["grid_mu"] == "12" and rec["violations"] == ""


def test_nodal_report(capsys, tmp_path):
    path = tmp_path / "report.csv"
    code, _ = run(capsys, "nodal", "report", "--cutoff", "12", "--out", str(path))
    text = path.read_text()
    assert code == 0 and "# violating_elements=0" in text


def test_pleijel_failing_window_exits_two(capsys):
    code, out = run(capsys, "pleijel", "--window", "1,20")
    assert code == 2 and "# verdict=FAIL" in out.out


def test_bounds(capsys):
    code, out = run(capsys, "bounds", "--lambda", "50,100")
    assert code == 0 and len(out.out.splitlines()) == 7


def test_errors_exit_one(capsys):
    code, out = run(capsys, "weyl", "--potential", "coulomb", "--dim", "3", "--lambda", "1")
    assert code == 1 and "error:" in out.err
    with pytest.raises(SystemExit) as exc:
        main(["spectrum", "radial", "--ell", "1"])
    assert exc.value.code == 1
