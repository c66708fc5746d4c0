import json
import subprocess
import sys

import pytest

from inertia_value.cli import main
from inertia_value.config import (
    ConfigError, bundled_config, bundled_config_text, parse_config, parse_config_text, serialize_config,
    with_overrides,
)
from inertia_value.domain import gb_fleet


def _small_config(tmp_path, **subs):
    text = bundled_config_text().replace("horizon = 24", "horizon = 3")
    text = text.replace("quantiles = 0.005, 0.1, 0.3, 0.5, 0.7, 0.9, 0.995", "quantiles = 0.1, 0.5, 0.9")
    for old, new in subs.items():
        text = text.replace(old, new)
    path = tmp_path / "study.ini"
    path.write_text(text)
    return path


def test_bundled_fleet_matches_table():
    cfg = bundled_config()
    assert list(cfg.classes) == gb_fleet()
    assert cfg.study.scale == 0.1
    assert cfg.system().classes[1].p_max == pytest.approx(50.0)


def test_serialize_roundtrip():
    cfg = bundled_config()
    again = parse_config_text(serialize_config(cfg))
    assert again == cfg
    assert again.digest() == cfg.digest()


def test_missing_damping_is_defaulted_and_logged(caplog):
    text = bundled_config_text().replace("damping = 0.005\n", "")
    with caplog.at_level("INFO", logger="inertia_value.config"):
        cfg = parse_config_text(text)
    assert cfg.params.damping == 0.005
    assert any("system.damping" in p for p in cfg.provenance)
    assert "system.damping" in caplog.text


def test_negative_marginal_cost_names_line():
    text = bundled_config_text()
    bad = text.replace("marginal_cost = 51", "marginal_cost = -51")
    line = bad.splitlines().index("marginal_cost = -51") + 1
    with pytest.raises(ConfigError, match=rf"<x>:{line}: .*marginal_cost"):
        parse_config_text(bad, "<x>")


def test_unknown_field_and_bad_number():
    text = bundled_config_text()
    with pytest.raises(ConfigError, match="unknown field system.inertia"):
        parse_config_text(text.replace("[system]\n", "[system]\ninertia = 3\n"))
    with pytest.raises(ConfigError, match="fleet.ccgt.unit_count"):
        parse_config_text(text.replace("unit_count = 110", "unit_count = lots"))
    with pytest.raises(ConfigError, match="no such config file"):
        parse_config("/nonexistent/study.ini")


def test_overrides():
    cfg = with_overrides(bundled_config(), seed=3, rocof_max=0.25, duration_hours=5, out_dir="x")
    assert (cfg.wind.seed, cfg.params.rocof_max, cfg.study.duration_hours, cfg.output_dir) == (3, 0.25, 5, "x")


def test_cli_run_artifacts_are_reproducible(tmp_path, monkeypatch):
    cfg = _small_config(tmp_path)
    outs = []
    for k in range(2):
        # same relative output dir so the resolved configs match too
        (tmp_path / f"w{k}").mkdir()
        monkeypatch.chdir(tmp_path / f"w{k}")
        assert main(["run", "--config", str(cfg), "--duration-hours", "2", "--out-dir", "out"]) == 0
        outs.append(tmp_path / f"w{k}" / "out")
    manifest = json.loads((outs[0] / "manifest.json").read_text())
    assert manifest["seed"] == 7 and manifest["subcommand"] == "run"
    for name in manifest["artifacts"] + ["manifest.json"]:
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()
    summary = json.loads((outs[0] / "run_summary.json").read_text())
    assert summary["hours"] == 2 and not summary["aborted"]


def test_cli_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("INERTIA_VALUE_SEED", "11")
    out = tmp_path / "o"
    assert main(["validate-frequency", "--h", "3600", "--r", "1800", "--out-dir", str(out)]) == 0
    assert json.loads((out / "manifest.json").read_text())["seed"] == 11


def test_cli_validate_frequency(tmp_path, capsys):
    out = tmp_path / "o"
    assert main(["validate-frequency", "--h", "450", "--r", "1700", "--out-dir", str(out)]) == 0
    res = json.loads((out / "frequency.json").read_text())
    assert not res["nadir_ok"] and not res["rocof_ok"]
    assert res["max_rocof"] == pytest.approx(2.0)
    assert "FAIL" in capsys.readouterr().out


def test_cli_error_json(tmp_path, capsys):
    bad = tmp_path / "bad.ini"
    bad.write_text(bundled_config_text().replace("marginal_cost = 51", "marginal_cost = -51"))
    assert main(["run", "--config", str(bad), "--out-dir", str(tmp_path / "o")]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ConfigError" and "marginal_cost" in err["message"]
    assert main(["validate-frequency", "--out-dir", str(tmp_path / "o")]) == 2


def test_cli_dump_model_matches_highs(tmp_path):
    highspy = pytest.importorskip("highspy")
    out = tmp_path / "o"
    assert main(["dump-model", "--horizon", "1", "--deterministic", "--backend", "builtin",
                 "--out-dir", str(out)]) == 0
    sol = json.loads((out / "model_solution.json").read_text())
    assert sol["status"] == "optimal" and sol["n_nodes"] == 2
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.readModel(str(out / "model.lp"))
    h.run()
    assert h.getInfo().objective_function_value == pytest.approx(sol["objective"], rel=1e-6)


def test_cli_marginal_snapshot(tmp_path):
    cfg = _small_config(tmp_path, **{"horizon = 3": "horizon = 3\nmarginal_condition = 40000, 30000\n"
                                     "extra_grid = 0, 1000, 2000, 3000, 4000"})
    out = tmp_path / "o"
    assert main(["marginal", "--config", str(cfg), "--out-dir", str(out)]) == 0
    lines = (out / "marginal.csv").read_text().splitlines()
    assert lines[0] == "extra_inertia,savings,marginal_value" and len(lines) == 6


def test_entry_point_subprocess(tmp_path):
    res = subprocess.run([sys.executable, "-m", "inertia_value", "validate-frequency", "--h", "9000", "--r", "1800",
                          "--out-dir", str(tmp_path)], capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
    assert "max rocof" in res.stdout
