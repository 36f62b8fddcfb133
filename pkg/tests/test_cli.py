import json

from fgverify.cli import main


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_list_groups(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    assert "pairs (7):" in out and "catalog instances (17):" in out
    assert "BROKEN" not in out
    assert main(["list", "--adversarial"]) == 0
    assert "BROKEN" in capsys.readouterr().out


def test_verify_pass_json(capsys):
    assert main(["verify", "S1", "--samples", "200"]) == 0
    doc = _json(capsys)
    assert doc["schema"] == 1
    (r,) = doc["reports"]
    assert r["name"] == "S1" and r["status"] == "pass" and r["samples_run"] == 200


def test_verify_broken_exit_1(capsys):
    assert main(["verify", "BROKEN", "--adversarial", "--samples", "100"]) == 1
    assert _json(capsys)["reports"][0]["status"] == "fail"


def test_broken_needs_adversarial():
    assert main(["verify", "BROKEN"]) == 2


def test_unknown_target_and_bad_flags():
    assert main(["verify", "no_such_target"]) == 2
    assert main(["verify", "S1", "--set", "pair.S1.zz=1"]) == 2
    assert main(["verify", "S1", "--set", "nonsense"]) == 2
    assert main(["verify", "S1", "--tail-tol", "-1"]) == 2
    assert main(["bogus"]) == 2


def test_set_override_reaches_target(capsys):
    assert main(["verify", "gosper", "--set", "catalog.gosper.x=1.4", "--json"]) == 0
    r = _json(capsys)["reports"][0]
    assert r["status"] == "pass"
    assert main(["verify", "S2", "--set", "pair.S2.d=2.5", "--samples", "50"]) == 0


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nseed = 5\nsamples = 30\nset = pair.S2.d=3.0\n")
    assert main(["verify", "S2", "--config", str(cfg)]) == 0
    assert _json(capsys)["reports"][0]["samples_run"] == 30
    # flags win over the file
    assert main(["verify", "S2", "--config", str(cfg), "--samples", "40"]) == 0
    assert _json(capsys)["reports"][0]["samples_run"] == 40
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    assert main(["verify", "S2", "--config", str(bad)]) == 2
    assert main(["verify", "S2", "--config", str(tmp_path / "missing.cfg")]) == 2


def _residuals(doc):
    return [(r["name"], r["max_abs_residual"], r["max_rel_residual"]) for r in doc["reports"]]


def test_fg_seed_and_determinism(monkeypatch, capsys):
    monkeypatch.setenv("FG_SEED", "42")
    main(["verify", "C3", "--samples", "100"])
    a = _json(capsys)
    main(["verify", "C3", "--samples", "100"])
    b = _json(capsys)
    main(["verify", "C3", "--samples", "100", "--seed", "43"])
    c = _json(capsys)
    assert _residuals(a) == _residuals(b)
    assert _residuals(a) != _residuals(c)
    monkeypatch.setenv("FG_SEED", "x")
    assert main(["verify", "C3"]) == 2


def test_tight_tol_fails_truncation_limited(capsys):
    assert main(["verify", "elliptic_theta", "--tol", "1e-15"]) == 1
    assert main(["verify", "S4", "--tol", "1e-15", "--samples", "50"]) == 1
    capsys.readouterr()
    assert main(["verify", "elliptic_theta"]) == 0


def test_out_and_text(tmp_path, capsys):
    out = tmp_path / "rep.json"
    assert main(["verify", "S1", "--samples", "20", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["reports"][0]["name"] == "S1"
    assert main(["verify", "S1", "--samples", "20", "--text"]) == 0
    text = capsys.readouterr().out
    assert text.startswith("PASS") and "1 passed, 0 failed" in text
    assert main(["verify", "S1", "--out", str(tmp_path / "no" / "dir.json")]) == 2


def test_suite_reports_sorted(capsys):
    code = main(["suite", "--samples", "100"])
    doc = _json(capsys)
    names = [r["name"] for r in doc["reports"]]
    assert names == sorted(names)
    failing = {r["name"] for r in doc["reports"] if r["status"] == "fail"}
    # the two displayed-constant checks are expected to fail (see README)
    assert failing == {"schlosser_decay_gate", "schlosser_h"}
    assert code == 1
