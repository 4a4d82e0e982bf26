"""Command line behaviour: exit codes, outputs, determinism."""

import csv
import json

import pytest

from zerocert.cli import main


def _write(tmp_path, doc, name="sc.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc), encoding="utf-8")
    return str(p)


def _pi_scenario():
    # sine-type lattice under a linear radial majorant, every stage on
    return {
        "label": "pi-lattice-linear",
        "zeros": {"generator": {"kind": "real-multiples", "step": 3.141592653589793,
                                "max_radius": 1.0e5}},
        "majorant": {"up": {"kind": "radial-power", "sigma": 1.0, "rho": 1.0}},
        "profile": {"kind": "plane-power", "power": 1.0},
        "family": {"kind": "truncated-log", "t_min": 0.5, "t_max": 50.0,
                   "ratio": 1.4},
        "grids": {
            "sufficiency": {"kind": "random-disk", "radius": 4.0,
                            "count": 24, "seed": 7},
            "m0": {"r_max": 40.0, "per_shell": 6},
        },
        "lemma1": {"d_tilde": {"radius": 1.0}, "s": {"radius": 0.5},
                   "z0": {"re": 0.0}, "b": 1.0},
    }


def _toy_scenario():
    doc = _pi_scenario()
    doc["zeros"]["generator"]["max_radius"] = 1.0e4
    doc["family"]["t_max"] = 8.0
    doc["family"]["ratio"] = 2.0
    return doc


def _read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


def test_all_pipeline(tmp_path, capsys):
    sc = _write(tmp_path, _pi_scenario())
    out = tmp_path / "run"
    rc = main(["all", "--scenario", sc, "--out", str(out)])
    assert rc == 0
    text = capsys.readouterr().out
    assert "consistent" in text
    assert "certified=True" in text

    report = json.loads((out / "report.json").read_text())
    assert report["command"] == "all"
    assert report["label"] == "pi-lattice-linear"
    for stage in ("necessary", "m0", "sufficiency", "lemma1"):
        info = report["stages"][stage]
        assert info["status"] == "ok"
        assert info["seconds"] >= 0.0
    assert report["stages"]["necessary"]["verdict"] == "consistent"
    assert report["stages"]["m0"]["bounded"] is True
    assert report["stages"]["sufficiency"]["violations"] == 0
    assert report["stages"]["lemma1"]["c_test"] > 0.0

    rows = _read_csv(out / "margin.csv")
    assert rows[0] == ["tau", "lhs", "rhs", "margin", "rhs_budget", "note"]
    assert _read_csv(out / "m0.csv")[0] == \
        ["z_re", "z_im", "shell", "deviation", "budget"]
    assert _read_csv(out / "sufficiency.csv")[0] == \
        ["z_re", "z_im", "log_abs", "tail", "bound", "excess", "ok"]
    assert _read_csv(out / "lemma1.csv")[0] == ["name", "value", "budget"]


def test_schema_failure_exits_2(tmp_path, capsys):
    sc = _write(tmp_path, {"zeros": {"points": [{"re": 1.0}]}})
    out = tmp_path / "run"
    rc = main(["check-necessary", "--scenario", sc, "--out", str(out)])
    assert rc == 2
    err = capsys.readouterr().err
    assert "schema: /: 'majorant' is a required property" in err
    assert not (out / "report.json").exists()


def test_missing_scenario_flag_exits_2(tmp_path, capsys):
    rc = main(["check-m0", "--out", str(tmp_path / "run")])
    assert rc == 2
    assert "needs --scenario" in capsys.readouterr().err


def test_stage_failure_exits_3_but_reports(tmp_path, capsys):
    # probe at 0.5 in the unit disk: the enlarged circle reaches the rim
    doc = {
        "label": "disk-bad",
        "zeros": {"points": [{"re": 0.2}]},
        "majorant": {"up": {"kind": "zero"}},
        "profile": {"kind": "disk-fraction", "fraction": 0.5, "R": 1.0},
        "grids": {"sufficiency": {"kind": "explicit",
                                  "points": [{"re": 0.5}]}},
    }
    sc = _write(tmp_path, doc)
    out = tmp_path / "run"
    rc = main(["construct-verify", "--scenario", sc, "--out", str(out)])
    assert rc == 3
    assert "stage sufficiency failed" in capsys.readouterr().err
    report = json.loads((out / "report.json").read_text())
    info = report["stages"]["sufficiency"]
    assert info["status"] == "failed"
    assert info["error_kind"]
    assert "seconds" in info


def test_tau_max_override(tmp_path):
    sc = _write(tmp_path, _toy_scenario())
    out = tmp_path / "run"
    rc = main(["check-necessary", "--scenario", sc, "--out", str(out),
               "--tau-max", "4.0"])
    assert rc == 0
    rows = _read_csv(out / "margin.csv")
    assert float(rows[-1][0]) == 4.0


def test_margin_csv_deterministic(tmp_path):
    sc = _write(tmp_path, _toy_scenario())
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["check-necessary", "--scenario", sc, "--out", str(a)]) == 0
    assert main(["check-necessary", "--scenario", sc, "--out", str(b)]) == 0
    assert (a / "margin.csv").read_bytes() == (b / "margin.csv").read_bytes()


def test_sufficiency_seed(tmp_path):
    sc = _write(tmp_path, _toy_scenario())
    a, b, c = tmp_path / "a", tmp_path / "b", tmp_path / "c"
    assert main(["construct-verify", "--scenario", sc, "--out", str(a)]) == 0
    assert main(["construct-verify", "--scenario", sc, "--out", str(b)]) == 0
    assert main(["construct-verify", "--scenario", sc, "--out", str(c),
                 "--seed", "9"]) == 0
    assert (a / "sufficiency.csv").read_bytes() == \
        (b / "sufficiency.csv").read_bytes()
    assert (a / "sufficiency.csv").read_bytes() != \
        (c / "sufficiency.csv").read_bytes()


@pytest.mark.parametrize("name,csvfile", [
    ("jensen-selftest", "jensen_selftest.csv"),
    ("means-selftest", "means_selftest.csv"),
])
def test_selftests(tmp_path, capsys, name, csvfile):
    out = tmp_path / "run"
    rc = main([name, "--out", str(out)])
    assert rc == 0
    assert "all ok" in capsys.readouterr().out
    rows = _read_csv(out / csvfile)
    assert rows[0] == ["check", "value", "tolerance", "ok"]
    assert all(r[3] == "True" for r in rows[1:])
