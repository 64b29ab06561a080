import json
from pathlib import Path

import numpy as np
import pytest

import exwave as xw
from exwave.cli import (
    SERIES_COLUMNS,
    _series_rows,
    main,
    parse_config,
    run,
    run_simulate,
    save_checkpoint,
)
from exwave.data import build_pair
from exwave.dynamics import solve_nlw
from exwave.errors import ConfigurationError


def cfg_text(**overrides) -> str:
    doc = {
        "p": 4.0,
        "s": 0.96,
        "J": 5,
        "grid": {"L": 20.0, "N": 1024},
        "dt": 0.004,
        "T": 1.0,
        "data": {"kind": "bump", "center": 3.0, "width": 1.0, "amplitude": 1.0},
        "stride": 10,
        "out": "unset",
    }
    doc.update(overrides)
    return json.dumps(doc)


class TestParseConfig:
    def test_reference_document(self):
        text = json.dumps({
            "p": 4.0, "s": 0.96, "J": 5,
            "grid": {"L": 40.0, "N": 8192}, "dt": 0.002, "T": "auto",
            "data": {"kind": "rough", "seed": 7, "amplitude": 1.0},
            "out": "runs/e1",
        })
        cfg = parse_config(text)
        assert cfg.window(5) == pytest.approx(1.438, abs=2e-3)
        assert cfg.out == "runs/e1"

    def test_inadmissible_s_names_key_and_threshold(self):
        with pytest.raises(ConfigurationError) as err:
            parse_config(cfg_text(s=0.9))
        msg = str(err.value)
        assert msg.startswith("s:")
        assert "0.941666666667" in msg

    def test_band_violation_names_key(self):
        with pytest.raises(ConfigurationError) as err:
            parse_config(json.dumps({"J": 30}))
        assert str(err.value).startswith("J:")

    def test_parse_error(self):
        with pytest.raises(ConfigurationError):
            parse_config("{not json")

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigurationError) as err:
            parse_config(json.dumps({"power": 4.0}))
        assert "power" in str(err.value)

    @pytest.mark.parametrize("patch,key", [
        ({"dt": 0.0}, "dt"),
        ({"grid": {"L": 20.0, "N": 0}}, "grid.N"),
        ({"stride": 0}, "stride"),
        ({"T": -1.0}, "T"),
        ({"data": {"kind": "noise"}}, "data.kind"),
    ])
    def test_precondition_diagnostics(self, patch, key):
        with pytest.raises(ConfigurationError) as err:
            parse_config(json.dumps(patch))
        assert str(err.value).startswith(key + ":")


class TestExitCodes:
    def test_selftest_ok(self, tmp_path, capsys):
        code = main(["selftest", "--out", str(tmp_path / "st"), "--no-figures"])
        assert code == 0
        summary = json.loads((tmp_path / "st" / "summary.json").read_text())
        assert summary["ok"] is True
        assert summary["checks"]["round_trip_error"]["value"] <= 1e-12

    def test_config_error_is_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(cfg_text(s=0.9))
        assert main(["simulate", "--config", str(bad)]) == 2

    def test_missing_config_file_is_2(self, tmp_path):
        assert main(["simulate", "--config", str(tmp_path / "nope.json")]) == 2

    def test_numerical_failure_is_3_and_recorded(self, tmp_path, capsys):
        doc = tmp_path / "nan.json"
        doc.write_text(cfg_text(
            dt=10.0, T=100.0, guard="off",
            data={"kind": "bump", "center": 3.0, "width": 1.0, "amplitude": 50.0},
            out=str(tmp_path / "nanrun"),
        ))
        assert main(["simulate", "--config", str(doc), "--no-figures"]) == 3
        manifest = json.loads((tmp_path / "nanrun" / "manifest.json").read_text())
        assert manifest["status"] == "failed"
        assert manifest["failure"]["t"] is not None


class TestSimulateOutputs:
    @pytest.fixture()
    def run_dir(self, tmp_path):
        doc = tmp_path / "sim.json"
        out = tmp_path / "run"
        doc.write_text(cfg_text(out=str(out)))
        assert main(["simulate", "--config", str(doc)]) == 0
        return out

    def test_series_schema(self, run_dir):
        lines = (run_dir / "series.csv").read_text().splitlines()
        assert lines[0] == ",".join(SERIES_COLUMNS)
        assert len(lines) > 10

    def test_manifest_checksums_cover_outputs(self, run_dir):
        manifest = json.loads((run_dir / "manifest.json").read_text())
        assert manifest["status"] == "ok"
        assert "series.csv" in manifest["outputs"]
        assert manifest["outputs"]["series.csv"].startswith("sha256:")
        assert "s_min" in manifest["derived"]

    def test_figure_rendered(self, run_dir):
        assert (run_dir / "series.png").stat().st_size > 0

    def test_determinism_and_overwrite_refusal(self, tmp_path, run_dir):
        doc = tmp_path / "sim2.json"
        out2 = tmp_path / "run2"
        doc.write_text(cfg_text(out=str(out2)))
        assert main(["simulate", "--config", str(doc)]) == 0
        assert (run_dir / "series.csv").read_bytes() == (out2 / "series.csv").read_bytes()
        # same directory again: refused without --force
        assert main(["simulate", "--config", str(doc)]) == 2
        assert main(["simulate", "--config", str(doc), "--force"]) == 0


class TestCheckpointResume:
    def test_resume_matches_uninterrupted(self, tmp_path):
        text = cfg_text(T=2.0, checkpoint_stride=100, out=str(tmp_path / "full"))
        doc = tmp_path / "c.json"
        doc.write_text(text)
        assert main(["simulate", "--config", str(doc), "--no-figures"]) == 0

        cfg = parse_config(text)
        cfg.out = str(tmp_path / "resumed")
        cfg.raw["out"] = cfg.out
        out = Path(cfg.out)
        out.mkdir()
        grid = cfg.grid()
        u0, u1 = build_pair(grid, dict(cfg.data))
        traj = solve_nlw(u0, u1, cfg.p, 200 * cfg.dt, cfg.stepper(),
                         ps=cfg.parameter_set(5), step0=0)
        rows = _series_rows(traj.times, traj.records)
        save_checkpoint(out / "checkpoint.npz", cfg, 200,
                        traj.final_state.u, traj.final_state.ut, rows)
        run_simulate(cfg, out, resume=True)

        full = (tmp_path / "full" / "series.csv").read_text().splitlines()
        resumed = (out / "series.csv").read_text().splitlines()
        assert full[0] == resumed[0]
        assert len(full) == len(resumed)
        for ra, rb in zip(full[1:], resumed[1:]):
            for col, xa, xb in zip(SERIES_COLUMNS, ra.split(","), rb.split(",")):
                fa, fb = float(xa), float(xb)
                assert fa == pytest.approx(fb, rel=1e-12, abs=1e-12), col

    def test_checkpoint_rejects_other_config(self, tmp_path):
        text = cfg_text(T=1.0, checkpoint_stride=100, out=str(tmp_path / "a"))
        doc = tmp_path / "c.json"
        doc.write_text(text)
        assert main(["simulate", "--config", str(doc), "--no-figures"]) == 0
        other = parse_config(cfg_text(T=1.5, checkpoint_stride=100, out=str(tmp_path / "a")))
        from exwave.cli import load_checkpoint

        with pytest.raises(ConfigurationError):
            load_checkpoint(tmp_path / "a" / "checkpoint.npz", other)


class TestTruncationCommand:
    def test_table_rows_per_J(self, tmp_path):
        doc = tmp_path / "tr.json"
        out = tmp_path / "tr"
        doc.write_text(json.dumps({
            "p": 4.0, "s": 0.96, "J": [3, 4],
            "grid": {"L": 20.0, "N": 1024}, "dt": 0.004, "T": "auto",
            "data": {"kind": "rough", "seed": 7, "amplitude": 1.0},
            "stride": 10, "out": str(out),
        }))
        assert main(["truncation", "--config", str(doc)]) == 0
        lines = (out / "table.csv").read_text().splitlines()
        assert len(lines) == 3  # header + one row per J
        assert lines[0].startswith("J,T,E0_v,E_T")
        assert (out / "series_J3.csv").exists()
        assert (out / "series_J4.csv").exists()
        assert (out / "truncation.png").stat().st_size > 0


class TestOtherCommands:
    def test_decay_summary(self, tmp_path):
        doc = tmp_path / "d.json"
        out = tmp_path / "dec"
        doc.write_text(json.dumps({
            "grid": {"L": 40.0, "N": 2048},
            "decay": {"points": 8},
            "out": str(out),
        }))
        assert main(["decay", "--config", str(doc)]) == 0
        summary = json.loads((out / "summary.json").read_text())
        assert -1.15 <= summary["slope"] <= -0.85
        assert (out / "decay.csv").exists()
        assert (out / "decay.png").stat().st_size > 0

    def test_inequalities_outputs(self, tmp_path):
        doc = tmp_path / "i.json"
        out = tmp_path / "ineq"
        doc.write_text(json.dumps({
            "grid": {"L": 40.0, "N": 4096},
            "inequalities": {
                "sobolev_p": [2.0], "trials": 25, "seed": 2,
                "bernstein": {"q_from": 2.0, "q_to": "inf", "n_lo": 2,
                              "n_hi": 7, "trials": 4, "seed": 0},
            },
            "out": str(out),
        }))
        assert main(["inequalities", "--config", str(doc)]) == 0
        summary = json.loads((out / "summary.json").read_text())
        assert summary["sobolev"][0]["width_spread"] < 10.0
        assert (out / "sobolev.csv").exists()
        assert (out / "bernstein.csv").exists()
