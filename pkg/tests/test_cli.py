"""Driver behavior: config validation, suite orchestration, persistence,
determinism, and exit codes."""
import json

import jsonschema
import numpy as np
import pytest

from wallindex.cli import ConfigError, load_config, main, resolve_suites
from wallindex.forms import FormError
from wallindex.presets import build_wall
from wallindex.report import load_schema, render_report

FLUX_CONFIG = """\
[manifold]
dimension = 2
points = 12

[fields]
gauge = "flux"
flux = 1

[run]
suites = ["rsa", "index", "cylinder"]
"""


def write_config(tmp_path, text, name="exp.toml"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestConfigParsing:
    def test_defaults_fill_in(self, tmp_path):
        cfg = load_config(write_config(tmp_path, "[fields]\ngauge = 'free'\n"))
        assert cfg["manifold.dimension"] == 2
        assert cfg["manifold.points"] == 16
        assert cfg["run.suites"] == ["all"]
        assert cfg["run.tolerance_scale"] == 1.0

    def test_rejects_unknown_keys(self, tmp_path):
        with pytest.raises(ConfigError, match="unknown manifold key"):
            load_config(write_config(tmp_path, "[manifold]\nsize = 4\n"))
        with pytest.raises(ConfigError, match="unknown table"):
            load_config(write_config(tmp_path, "[extras]\nx = 1\n"))

    def test_rejects_bad_values(self, tmp_path):
        with pytest.raises(ConfigError, match="dimension"):
            load_config(write_config(tmp_path, "[manifold]\ndimension = 3\n"))
        with pytest.raises(ConfigError, match="points"):
            load_config(write_config(tmp_path, "[manifold]\npoints = 4\n"))
        with pytest.raises(ConfigError, match="unknown preset"):
            load_config(write_config(tmp_path, "[fields]\ngauge = 'magic'\n"))

    def test_parse_error_carries_location(self, tmp_path):
        with pytest.raises(ConfigError, match="line"):
            load_config(write_config(tmp_path, "[manifold\npoints = 4\n"))

    def test_suite_resolution(self):
        assert resolve_suites(["all"], 2) == ["forms", "transgression", "rsa",
                                              "index", "cylinder"]
        assert resolve_suites(["all"], 4) == ["forms", "transgression", "rsa",
                                              "cylinder"]
        assert resolve_suites(["rsa,cylinder", "rsa"], 2) == ["rsa", "cylinder"]
        with pytest.raises(ConfigError, match="unknown suite"):
            resolve_suites(["spectra"], 2)
        with pytest.raises(ConfigError, match="two-dimensional"):
            resolve_suites(["index"], 4)


class TestPresetBuilders:
    def test_constant_jump_height(self):
        w = build_wall(gauge="constant-jump", jump=0.3)
        comp = w.gauge_jump.component((0,))
        assert np.allclose(comp, -2j * np.pi * 0.3 / (2 * np.pi))

    def test_flux_sets_twist(self):
        w = build_wall(gauge="flux", flux=2)
        assert w.twist_flux == 2
        assert w.gauge_jump.max_abs() == 0.0

    def test_pure_gauge_requires_integer_winding(self):
        w = build_wall(gauge="pure-gauge", winding=2)
        assert np.allclose(w.gauge_jump.component((0,)),
                           -2j * np.pi * 2.0 / (2 * np.pi))
        with pytest.raises(ValueError, match="integer"):
            build_wall(gauge="pure-gauge", winding=0.5)

    def test_seeded_fields_are_reproducible(self):
        a = build_wall(gauge="random-band-limited", seed=9, rank=2)
        b = build_wall(gauge="random-band-limited", seed=9, rank=2)
        for ax in range(2):
            assert np.array_equal(a.gauge_background.component((ax,)),
                                  b.gauge_background.component((ax,)))

    def test_missing_parameter_is_an_error(self):
        with pytest.raises(ValueError, match="jump"):
            build_wall(gauge="constant-jump")
        with pytest.raises(ValueError, match="nonzero"):
            build_wall(gauge="flux", flux=0)

    def test_flux_needs_a_two_torus(self):
        with pytest.raises(FormError):
            build_wall(dimension=4, points=8, gauge="flux", flux=1)


class TestRunCommand:
    def test_flux_run_passes_and_persists(self, tmp_path, capsys):
        cfg = write_config(tmp_path, FLUX_CONFIG)
        out = tmp_path / "out"
        assert main(["run", str(cfg), "--out-dir", str(out)]) == 0
        text = capsys.readouterr().out
        assert "overall: pass" in text
        payload = json.loads((out / "report.json").read_text())
        jsonschema.validate(payload, load_schema())
        assert payload["passed"] is True
        names = [s["name"] for s in payload["suites"]]
        assert names == ["rsa", "index", "cylinder"]
        spectra = (out / "spectra.csv").read_text().splitlines()
        assert spectra[0] == "eigenvalue,chirality"
        assert len(spectra) == 2 * 12 * 12 + 1
        sweep = (out / "sweep.csv").read_text().splitlines()
        assert sweep[0] == "eps,value"
        assert len(sweep) == 5

    def test_reports_are_byte_identical(self, tmp_path):
        cfg = write_config(tmp_path, FLUX_CONFIG)
        assert main(["run", str(cfg), "--out-dir", str(tmp_path / "a")]) == 0
        assert main(["run", str(cfg), "--out-dir", str(tmp_path / "b")]) == 0
        assert (tmp_path / "a/report.json").read_bytes() \
            == (tmp_path / "b/report.json").read_bytes()
        assert (tmp_path / "a/spectra.csv").read_bytes() \
            == (tmp_path / "b/spectra.csv").read_bytes()

    def test_parallel_run_matches_serial(self, tmp_path):
        cfg = write_config(tmp_path, FLUX_CONFIG)
        assert main(["run", str(cfg), "--out-dir", str(tmp_path / "a")]) == 0
        assert main(["run", str(cfg), "--out-dir", str(tmp_path / "b"),
                     "--parallelism", "3"]) == 0
        a = json.loads((tmp_path / "a/report.json").read_text())
        b = json.loads((tmp_path / "b/report.json").read_text())
        a["config"].pop("run.parallelism")
        b["config"].pop("run.parallelism")
        assert a == b

    def test_tight_tolerances_fail_with_exit_one(self, tmp_path, capsys):
        cfg = write_config(tmp_path, FLUX_CONFIG)
        code = main(["run", str(cfg), "--out-dir", str(tmp_path / "out"),
                     "--tolerance-scale", "1e-12"])
        assert code == 1
        text = capsys.readouterr().out
        assert "FAIL" in text

    def test_suite_flag_overrides_config(self, tmp_path):
        cfg = write_config(tmp_path, FLUX_CONFIG)
        out = tmp_path / "out"
        assert main(["run", str(cfg), "--out-dir", str(out),
                     "--suite", "forms"]) == 0
        payload = json.loads((out / "report.json").read_text())
        assert [s["name"] for s in payload["suites"]] == ["forms"]

    def test_env_var_sets_output_dir(self, tmp_path, monkeypatch):
        cfg = write_config(tmp_path, FLUX_CONFIG)
        monkeypatch.setenv("WALLINDEX_OUT", str(tmp_path / "envout"))
        assert main(["run", str(cfg)]) == 0
        assert (tmp_path / "envout/report.json").exists()

    def test_config_problems_exit_two(self, tmp_path, capsys):
        assert main(["run", str(tmp_path / "missing.toml")]) == 2
        bad = write_config(tmp_path, "[manifold]\ndimension = 7\n")
        assert main(["run", str(bad)]) == 2
        assert "config error" in capsys.readouterr().err

    def test_four_torus_flux_is_a_config_error(self, tmp_path):
        cfg = write_config(tmp_path, "[manifold]\ndimension = 4\npoints = 8\n"
                           "[fields]\ngauge = 'flux'\nflux = 1\n")
        assert main(["run", str(cfg)]) == 2


class TestReportCommand:
    def test_round_trip_render(self, tmp_path, capsys):
        cfg = write_config(tmp_path, FLUX_CONFIG)
        out = tmp_path / "out"
        assert main(["run", str(cfg), "--out-dir", str(out)]) == 0
        run_text = capsys.readouterr().out
        assert main(["report", str(out / "report.json")]) == 0
        report_text = capsys.readouterr().out
        # the run output adds a trailing location line; the rendered table
        # itself must match byte for byte
        assert report_text in run_text

    def test_rejects_non_reports(self, tmp_path):
        bogus = tmp_path / "x.json"
        bogus.write_text("{\"hello\": 1}")
        assert main(["report", str(bogus)]) == 2
        assert main(["report", str(tmp_path / "missing.json")]) == 2

    def test_empty_suite_list_renders_header_only(self):
        text = render_report({"schema_version": 1, "config": {},
                              "suites": [], "passed": True})
        lines = text.splitlines()
        assert any(line.startswith("suite") for line in lines)
        assert lines[-1] == "overall: pass"

    def test_failing_row_is_flagged(self):
        payload = {"schema_version": 1, "config": {}, "passed": False,
                   "suites": [{"name": "rsa", "passed": False, "checks": [
                       {"name": "x", "value": 1.0, "residual": 2e-3,
                        "tolerance": 1e-6, "passed": False}]}]}
        text = render_report(payload)
        row = [ln for ln in text.splitlines() if " x " in ln or ln.endswith("FAIL")]
        assert any("FAIL" in ln and "1.0e-06" in ln for ln in row)
