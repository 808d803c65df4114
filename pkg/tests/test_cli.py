import json
import subprocess
import sys

import pytest

from subcycle import config, runner
from subcycle.cli import main
from subcycle.errors import ConfigInvalid, MissingArtifact
from subcycle.references import compare


def _write(tmp_path, cfg, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return path


def _data_files(bundle):
    return {p.name: p.read_bytes() for p in sorted(bundle.iterdir()) if p.name != "manifest.json"}


def _manifest(bundle):
    return json.loads((bundle / "manifest.json").read_text())


@pytest.fixture(scope="module")
def extract_bundle(tmp_path_factory):
    out = tmp_path_factory.mktemp("bundle") / "extract"
    cfg = tmp_path_factory.getbasetemp() / "extract.json"
    cfg.write_text(json.dumps({"scenario": "extract-mode"}))
    assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0
    return out


def test_list_scenarios(capsys):
    assert main(["list-scenarios"]) == 0
    out = capsys.readouterr().out
    for name in config.SCENARIOS:
        assert name in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "subcycle", "list-scenarios"], capture_output=True, text=True)
    assert res.returncode == 0 and "squeezed" in res.stdout


@pytest.mark.parametrize(
    "raw, field",
    [
        ({"scenario": "nope"}, "scenario"),
        ({"scenario": "squeezed", "delta_p_fs": -1}, "delta_p_fs"),
        ({"scenario": "squeezed", "r_eff": "five"}, "r_eff"),
        ({"scenario": "squeezed", "bogus_field": 1}, "bogus_field"),
        ({"scenario": "squeezed", "t_d_min_fs": 5.0, "t_d_max_fs": 1.0}, "t_d_max_fs"),
        ({"scenario": "reconstruct", "state": "cat"}, "state"),
        ({"scenario": "eos", "cutoff_min_thz": 100.0}, "cutoff_min_thz"),
        ({"scenario": "subtracted", "r_eff": 0.0}, "r_eff"),
    ],
)
def test_config_errors_exit_2(tmp_path, capsys, raw, field):
    path = _write(tmp_path, raw)
    assert main(["run", "--config", str(path), "--out", str(tmp_path / "o")]) == 2
    assert field in capsys.readouterr().err
    assert not (tmp_path / "o").exists()


def test_all_problems_reported_together():
    with pytest.raises(ConfigInvalid) as err:
        config.validate({"scenario": "squeezed", "delta_p_fs": -1, "n_freq": 3, "seed": -2})
    assert set(err.value.problems) == {"delta_p_fs", "n_freq", "seed"}


def test_missing_or_malformed_config(tmp_path):
    assert main(["run", "--config", str(tmp_path / "none.json"), "--out", str(tmp_path / "o")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["run", "--config", str(bad), "--out", str(tmp_path / "o")]) == 2
    assert main(["run", "--out", str(tmp_path / "o")]) == 2


def test_bundle_contents(extract_bundle):
    m = _manifest(extract_bundle)
    assert m["config"]["scenario"] == "extract-mode"
    assert m["seeds"] == {"seed": 0}
    assert m["code_version"]
    assert "created" in m
    assert set(m["files"]) == set(_data_files(extract_bundle))
    assert any(n.endswith(".svg") for n in m["files"])


def test_deterministic_rerun(tmp_path, extract_bundle):
    cfg = _write(tmp_path, {"scenario": "extract-mode"})
    out = tmp_path / "again"
    assert main(["run", "--config", str(cfg), "--out", str(out), "--threads", "2"]) == 0
    assert _data_files(out) == _data_files(extract_bundle)
    a, b = _manifest(out), _manifest(extract_bundle)
    a.pop("created"), b.pop("created")
    assert a == b


def test_seed_override(tmp_path):
    cfg = _write(tmp_path, {"scenario": "extract-mode", "seed": 3})
    out = tmp_path / "seeded"
    assert main(["run", "--config", str(cfg), "--out", str(out), "--seed", "9"]) == 0
    assert _manifest(out)["config"]["seed"] == 9


def test_manifest_round_trip(extract_bundle, tmp_path):
    echoed = _manifest(extract_bundle)["config"]
    assert config.validate(echoed) == echoed
    out = tmp_path / "replay"
    assert main(["run", "--config", str(extract_bundle / "manifest.json"), "--out", str(out)]) == 0
    assert _data_files(out) == _data_files(extract_bundle)


def test_sampling_seed_changes_samples(tmp_path):
    base = {"scenario": "reconstruct", "n_samples": 500, "n_radon_phases": 16}
    a = runner.RUNNERS["reconstruct"](config.validate(dict(base, seed=1)))
    b = runner.RUNNERS["reconstruct"](config.validate(dict(base, seed=1)))
    c = runner.RUNNERS["reconstruct"](config.validate(dict(base, seed=2)))
    assert a.files["samples.csv"] == b.files["samples.csv"] != c.files["samples.csv"]


def test_no_hidden_state_between_scenarios():
    ext = config.validate({"scenario": "extract-mode"})
    rec = config.validate({"scenario": "reconstruct", "n_samples": 500, "n_radon_phases": 16})
    first = runner.RUNNERS["extract-mode"](ext).files
    runner.RUNNERS["reconstruct"](rec)
    second = runner.RUNNERS["extract-mode"](ext).files
    assert first == second


def test_compare_all_pass(extract_bundle, tmp_path, capsys):
    assert main(["compare", str(extract_bundle), "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "compare_report.json").read_text())
    assert report["passed"]
    for row in report["criteria"]:
        assert set(row) == {"criterion", "measured", "expected", "tolerance", "verdict"}


def test_compare_detects_tampering(extract_bundle, tmp_path, capsys):
    import shutil

    bundle = tmp_path / "tampered"
    shutil.copytree(extract_bundle, bundle)
    path = bundle / "extraction.csv"
    header, row = path.read_text().splitlines()
    path.write_text(header + "\n" + ",".join(["5.0e-02"] + row.split(",")[1:]) + "\n")
    assert main(["compare", str(bundle)]) == 3
    report = json.loads(capsys.readouterr().out)
    failed = [r["criterion"] for r in report["criteria"] if r["verdict"] == "fail"]
    assert failed == ["recovered_r"]


def test_compare_custom_reference(extract_bundle, tmp_path):
    ref = tmp_path / "ref.json"
    ref.write_text(json.dumps({"criteria": [
        {"name": "tight_r", "file": "extraction.csv", "column": "r_recovered", "reduce": "row",
         "expected": 1.0, "rel_tol": 0.01}]}))
    report = compare(extract_bundle, ref)
    assert not report["passed"] and report["criteria"][0]["criterion"] == "tight_r"


def test_empty_bundle(tmp_path):
    with pytest.raises(MissingArtifact):
        compare(tmp_path, None)
    assert main(["compare", str(tmp_path)]) == 3


def test_missing_file_in_bundle(extract_bundle, tmp_path):
    import shutil

    bundle = tmp_path / "partial"
    shutil.copytree(extract_bundle, bundle)
    (bundle / "extraction.csv").unlink()
    with pytest.raises(MissingArtifact):
        compare(bundle, None)


def test_failing_scenario_writes_nothing(tmp_path):
    cfg = _write(tmp_path, {"scenario": "extract-mode", "threshold": 1.0})
    out = tmp_path / "never"
    assert main(["run", "--config", str(cfg), "--out", str(out)]) == 1
    assert not out.exists()
