import csv
import json
import subprocess
import sys

import pytest

from persistkit import __version__
from persistkit.cli import main
from persistkit.config import CONFIG_SCHEMA, ConfigError, validate
from persistkit.stats.identities import FAIL, IdentityReport, IdentityResult

SUMMARY_KEYS = {"experiment", "generator", "theta_hat", "theta_stderr", "intercept",
                "log_correction", "grid", "seed", "toolkit_version"}


def write(tmp_path, cfg, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return path


def grid_config(out, **kw):
    cfg = {"experiment": "persistence_grid", "generator": {"type": "walk"},
           "n_grid": [2**k for k in range(8, 13)], "trials": 10_000, "seed": 1, "out": str(out)}
    cfg.update(kw)
    return cfg


def test_persistence_grid_run(tmp_path):
    out = tmp_path / "out"
    code = main(["run", "--config", str(write(tmp_path, grid_config(out))), "--plot"])
    assert code == 0
    raw = (out / "results.csv").read_bytes()
    assert raw.startswith(b"n,level,trials,p_hat,ci_low,ci_high\n")
    assert b"\r" not in raw
    rows = list(csv.DictReader(raw.decode().splitlines()))
    assert [int(r["n"]) for r in rows] == [256, 512, 1024, 2048, 4096]
    summary = json.loads((out / "summary.json").read_text())
    assert SUMMARY_KEYS <= set(summary)
    assert summary["toolkit_version"] == __version__
    assert 0.3 < summary["theta_hat"] < 0.7
    svg = (out / "plot.svg").read_text()
    assert svg.lstrip().startswith("<?xml") and "<svg" in svg


def test_rerun_is_byte_identical_across_workers(tmp_path):
    outs = []
    for workers in ("1", "3"):
        out = tmp_path / f"w{workers}"
        cfg = write(tmp_path, grid_config(out, generator={"type": "fgn", "hurst": 0.7},
                                          n_grid=[16, 32, 64, 128], trials=2000))
        assert main(["run", "--config", str(cfg), "--workers", workers, "--plot"]) == 0
        outs.append(out)
    for name in ("results.csv", "summary.json", "plot.svg"):
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()


def test_identities_brute_force_exit_zero(tmp_path):
    out = tmp_path / "id"
    cfg = {"experiment": "identities", "seed": 0, "out": str(out), "n_grid": [5],
           "generator": {"type": "rwrs", "walk": {"kind": "simple"},
                         "scenery": {"law": "lazy_rademacher", "q": 0.5}}}
    assert main(["run", "--config", str(write(tmp_path, cfg))]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["identities"] == "all PASS"


def test_identity_failure_exit_two(tmp_path, monkeypatch):
    import persistkit.experiments as ex

    def failing(*args, **kwargs):
        return IdentityReport("x", 3, "brute_force", (IdentityResult("half", FAIL, 1, 2),))

    monkeypatch.setattr(ex, "verify_identities", failing)
    cfg = {"experiment": "identities", "seed": 0, "out": str(tmp_path / "f"), "n_grid": [3],
           "generator": {"type": "walk"}}
    assert main(["run", "--config", str(write(tmp_path, cfg))]) == 2


def test_invalid_mdm_p_names_field(tmp_path, capsys):
    cfg = grid_config(tmp_path / "x", generator={"type": "mdm", "p": 1.5})
    assert main(["run", "--config", str(write(tmp_path, cfg))]) == 1
    err = capsys.readouterr().err
    assert "generator.p" in err


def test_missing_seed_and_bad_json(tmp_path, capsys):
    cfg = grid_config(tmp_path / "x")
    del cfg["seed"]
    assert main(["validate-config", "--config", str(write(tmp_path, cfg))]) == 1
    assert "seed" in capsys.readouterr().err
    bad = tmp_path / "bad.json"
    bad.write_text('{"experiment": "mean_max",\n "seed": }')
    assert main(["validate-config", "--config", str(bad)]) == 1
    assert "line 2" in capsys.readouterr().err


@pytest.mark.parametrize("patch, field", [
    ({"trials": 0}, "trials"),
    ({"experiment": "bogus"}, "experiment"),
    ({"generator": {"type": "fgn", "hurst": 1.0}}, "generator.hurst"),
    ({"generator": {"type": "walk", "dimension": 2, "kind": "stable"}}, "generator"),
    ({"generator": {"type": "rwrs", "scenery": {"law": "cauchy"}}}, "generator.scenery.law"),
    ({"colour": "red"}, "colour"),
    ({"n_grid": []}, "n_grid"),
])
def test_config_errors_name_field(tmp_path, patch, field):
    with pytest.raises(ConfigError) as info:
        validate({**grid_config(tmp_path), **patch})
    assert info.value.field == field


def test_validate_and_schema(tmp_path, capsys):
    assert main(["validate-config", "--config", str(write(tmp_path, grid_config(tmp_path)))]) == 0
    assert main(["validate-config", "--print-schema"]) == 0
    assert json.loads(capsys.readouterr().out.split("\n", 1)[1]) == CONFIG_SCHEMA


def test_other_experiments(tmp_path):
    runs = {
        "mean_max": {"experiment": "mean_max", "generator": {"type": "mdm"},
                     "n_grid": [64, 256], "trials": 300},
        "sup_delta": {"experiment": "sup_delta", "trials": 200,
                      "sup_delta": {"inner_steps": 512, "extrapolate": True}},
        "brute_force": {"experiment": "brute_force", "generator": {"type": "walk"},
                        "n_grid": [2, 4]},
        "mc_identities": {"experiment": "identities", "generator": {"type": "mdm"},
                          "n_grid": [64], "trials": 500, "method": "monte_carlo"},
    }
    for name, cfg in runs.items():
        out = tmp_path / name
        path = write(tmp_path, {**cfg, "seed": 3, "out": str(out)}, f"{name}.json")
        assert main(["run", "--config", str(path), "--plot"]) == 0, name
        summary = json.loads((out / "summary.json").read_text())
        assert SUMMARY_KEYS <= set(summary)
    rows = list(csv.DictReader((tmp_path / "brute_force" / "results.csv").read_text().splitlines()))
    assert rows[0]["probability"] == "1/4"


def test_seed_override(tmp_path):
    cfg = write(tmp_path, grid_config(tmp_path / "o", n_grid=[8, 16], trials=500))
    assert main(["run", "--config", str(cfg), "--seed", "99"]) == 0
    assert json.loads((tmp_path / "o" / "summary.json").read_text())["seed"] == 99


def test_console_script_help():
    res = subprocess.run([sys.executable, "-m", "persistkit.cli", "--help"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    for sub in ("run", "reproduce-paper", "validate-config"):
        assert sub in res.stdout
