"""End-to-end runs of the command-line harness through click's test runner."""

import json

import pytest
from click.testing import CliRunner

from artinlab import cli

A3 = {"vertices": ["s1", "s2", "s3"], "edges": [["s1", "s2", 3], ["s2", "s3", 3]]}
A5 = {
    "vertices": ["s1", "s2", "s3", "s4", "s5"],
    "edges": [["s1", "s2", 3], ["s2", "s3", 3], ["s3", "s4", 3], ["s4", "s5", 3]],
}
F4 = {
    "vertices": ["s1", "s2", "s3", "s4"],
    "edges": [["s1", "s2", 3], ["s2", "s3", 4], ["s3", "s4", 3]],
}
CC2 = {
    "vertices": ["s1", "s2", "s3", "s4"],
    "edges": [["s1", "s2", 4], ["s2", "s3", 3], ["s3", "s4", 4]],
}


@pytest.fixture()
def runner():
    return CliRunner()


def _write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def _json_out(result):
    assert result.exit_code == 0, result.output
    return json.loads(result.output)


def test_classify_names_f4(runner, tmp_path):
    out = _json_out(runner.invoke(cli.main, ["classify", _write(tmp_path, "d.json", F4)]))
    assert out["family"] == "F4"
    assert out["names"] == ["F4", "F(1,1)"]
    assert out["spherical"] is True
    assert out["abi"] is False and out["abi_witness"] == ["s1", "s2", "s3", "s4"]


def test_certificate_on_abi_line_is_settled(runner, tmp_path):
    out = _json_out(
        runner.invoke(cli.main, ["certificate", _write(tmp_path, "d.json", A3)])
    )
    assert out["verdict"] == "settled"
    assert out["abi"] is True
    assert all(leaf["status"] == "settled" for leaf in out["elementary_leaves"])


def test_cores_growth_and_elementary_short_circuit(runner, tmp_path):
    out = _json_out(runner.invoke(cli.main, ["cores", _write(tmp_path, "d.json", CC2)]))
    assert out["elementary"] is False
    assert len(out["cores"]) == 4
    assert {c["config_label"] for c in out["cores"]} == {11}
    assert all(c["core_kind"] == "C~-like" for c in out["cores"])

    out = _json_out(runner.invoke(cli.main, ["cores", _write(tmp_path, "e.json", F4)]))
    assert out["elementary"] is True and out["cores"] == []
    assert any(s["grade"] == "atomic" for s in out["seeds"])


def test_complex_build_plain_relative_and_subdivided(runner, tmp_path):
    path = _write(tmp_path, "a3.json", A3)
    out = _json_out(runner.invoke(cli.main, ["complex", "build", path]))
    assert out["types"] == ["s1", "s2", "s3"]
    assert len(out["vertices"]) == 14 and len(out["chambers"]) == 24

    out = _json_out(
        runner.invoke(cli.main, ["complex", "build", path, "--relative", "s1,s3"])
    )
    assert len(out["vertices"]) == 8 and len(out["chambers"]) == 12

    out = _json_out(
        runner.invoke(cli.main, ["complex", "build", path, "--subdivide", "B:s1,s3"])
    )
    assert len(out["fake"]) == 12 and len(out["chambers"]) == 48


def test_complex_build_d_subdivision(runner, tmp_path):
    path = _write(tmp_path, "a5.json", A5)
    out = _json_out(
        runner.invoke(
            cli.main, ["complex", "build", path, "--subdivide", "D:s1,s2,s4,s5"]
        )
    )
    assert len(out["chambers"]) == 2880
    assert len(out["fake"]) == 60


def test_file_and_flag_errors(runner, tmp_path):
    r = runner.invoke(cli.main, ["classify", str(tmp_path / "missing.json")])
    assert r.exit_code != 0 and "cannot read" in r.output

    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    r = runner.invoke(cli.main, ["classify", str(bad)])
    assert r.exit_code != 0 and "bad diagram file" in r.output

    path = _write(tmp_path, "a3.json", A3)
    r = runner.invoke(cli.main, ["complex", "build", path, "--subdivide", "Q:s1"])
    assert r.exit_code != 0 and "--subdivide wants" in r.output

    r = runner.invoke(cli.main, ["verify", "nonsense"])
    assert r.exit_code != 0


def test_verify_poset_is_byte_stable(runner, tmp_path):
    out1, out2, out3 = (str(tmp_path / n) for n in ("r1.json", "r2.json", "r3.json"))
    for out in (out1, out2):
        r = runner.invoke(cli.main, ["verify", "poset", "--seed", "7", "--out", out])
        assert r.exit_code == 0, r.output
    assert (
        (tmp_path / "r1.json").read_bytes() == (tmp_path / "r2.json").read_bytes()
    )
    r = runner.invoke(cli.main, ["verify", "poset", "--seed", "8", "--out", out3])
    assert r.exit_code == 0
    assert (
        (tmp_path / "r1.json").read_bytes() != (tmp_path / "r3.json").read_bytes()
    )
    report = json.loads((tmp_path / "r1.json").read_text())
    assert report["schema"] == 1 and report["seed"] == 7
    assert sum(report["summary"].values()) == len(report["cases"])
    assert "wall_ms" not in report["cases"][0]


def test_verify_all_exit_zero_with_expected_verdict_mix(runner, tmp_path):
    out = str(tmp_path / "all.json")
    r = runner.invoke(cli.main, ["verify", "all", "--out", out])
    assert r.exit_code == 0, r.output
    report = json.loads((tmp_path / "all.json").read_text())
    s = report["summary"]
    assert s["fail"] == 0 and s["error"] == 0
    assert s["gate-failed"] == 1 and s["cap-limited"] == 1
    assert sum(s.values()) == len(report["cases"]) == 48
    ids = [(c["fixture"], c["operation"]) for c in report["cases"]]
    assert ids == sorted(ids)


def test_verify_timings_flag_adds_wall_time(runner, tmp_path):
    out = str(tmp_path / "t.json")
    r = runner.invoke(cli.main, ["verify", "diagram", "--timings", "--out", out])
    assert r.exit_code == 0
    report = json.loads((tmp_path / "t.json").read_text())
    assert all("wall_ms" in c for c in report["cases"])


def test_verify_worker_count_does_not_change_report(runner, tmp_path):
    base, multi = str(tmp_path / "w1.json"), str(tmp_path / "w4.json")
    r = runner.invoke(cli.main, ["verify", "bihelly", "--out", base])
    assert r.exit_code == 0
    r = runner.invoke(
        cli.main, ["verify", "bihelly", "--out", multi], env={"ARTINLAB_WORKERS": "4"}
    )
    assert r.exit_code == 0
    assert (tmp_path / "w1.json").read_bytes() == (tmp_path / "w4.json").read_bytes()


def test_verify_exit_one_on_failing_case(runner, monkeypatch):
    def failing_suite(seed, cap):
        return [("fixture", "operation", lambda: cli._case("fail", "forced"))]

    monkeypatch.setitem(cli.SUITES, "diagram", failing_suite)
    r = runner.invoke(cli.main, ["verify", "diagram"])
    assert r.exit_code == 1
    assert "fail" in r.output


def test_verify_error_verdict_absorbs_exceptions(runner, monkeypatch):
    def exploding_suite(seed, cap):
        return [("fixture", "operation", lambda: 1 / 0)]

    monkeypatch.setitem(cli.SUITES, "diagram", exploding_suite)
    r = runner.invoke(cli.main, ["verify", "diagram"])
    assert r.exit_code == 1
    assert "ZeroDivisionError" in r.output
