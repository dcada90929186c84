import csv
import json
import subprocess
import sys

import pytest

from ridematch.cli import main


def write_config(path, **overrides):
    doc = {
        "network": {"kind": "grid", "rows": 3, "cols": 3},
        "demand": {"kind": "uniform", "requests_per_hour": 120},
        "loading_period_s": 300,
        "fleet_size": 3,
        "capacity": 4,
        "flexibility_s": 240,
        "update_interval_s": 30,
        "seed": 1,
    }
    doc.update(overrides)
    path.write_text(json.dumps(doc))
    return doc


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


class TestRun:
    def test_minimal_run_artifacts(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        write_config(cfg)
        out = tmp_path / "out"
        assert main(["run", "--config", str(cfg), "--out-dir",
                     str(out)]) == 0
        assert (out / "trip_log.csv").exists()
        assert (out / "metrics.csv").exists()
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["artifact"] == "ridematch"
        assert manifest["seed"] == 1
        assert len(manifest["config_sha256"]) == 64
        rows = read_csv(out / "metrics.csv")
        assert rows[0][0] == "schema_version"
        assert len(rows) == 2
        assert "service rate" in capsys.readouterr().out

    def test_same_invocation_identical_outputs(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        write_config(cfg)
        logs = []
        for sub in ("one", "two"):
            out = tmp_path / sub
            assert main(["run", "--config", str(cfg),
                         "--out-dir", str(out)]) == 0
            logs.append((out / "trip_log.csv").read_bytes())
        assert logs[0] == logs[1]

    def test_rerun_from_manifest(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        write_config(cfg, seed=7)
        out1 = tmp_path / "first"
        out2 = tmp_path / "second"
        assert main(["run", "--config", str(cfg),
                     "--out-dir", str(out1)]) == 0
        assert main(["run", "--config", str(out1 / "manifest.json"),
                     "--out-dir", str(out2)]) == 0
        assert (out1 / "trip_log.csv").read_bytes() \
            == (out2 / "trip_log.csv").read_bytes()

    def test_seed_and_matcher_overrides(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        write_config(cfg)
        out = tmp_path / "out"
        assert main(["run", "--config", str(cfg), "--out-dir", str(out),
                     "--seed", "42", "--matcher", "baseline"]) == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["config"]["seed"] == 42
        assert manifest["config"]["matcher"] == "baseline"

    def test_missing_network_file_names_path(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        write_config(cfg, network={"kind": "file",
                                   "path": str(tmp_path / "nowhere.json")})
        assert main(["run", "--config", str(cfg),
                     "--out-dir", str(tmp_path / "out")]) == 2
        err = capsys.readouterr().err
        assert "error:" in err
        assert "nowhere.json" in err

    def test_bad_config_diagnostic(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("{}")
        assert main(["run", "--config", str(cfg),
                     "--out-dir", str(tmp_path / "out")]) == 2
        assert "missing config fields" in capsys.readouterr().err


class TestValidate:
    def test_ok(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        write_config(cfg)
        assert main(["validate", "--config", str(cfg)]) == 0
        assert "ok" in capsys.readouterr().out

    def test_rejects_unreachable_demand(self, tmp_path, capsys):
        net = {"nodes": [{"id": 0}, {"id": 1}],
               "links": [{"from": 0, "to": 1, "length_m": 10.0,
                          "travel_time_s": 10}]}
        net_path = tmp_path / "net.json"
        net_path.write_text(json.dumps(net))
        cfg = tmp_path / "cfg.json"
        write_config(cfg, network={"kind": "file", "path": str(net_path)},
                     demand={"kind": "poisson", "od_rates": [
                         {"origin": 1, "destination": 0,
                          "rate_per_hour": 5}]})
        assert main(["validate", "--config", str(cfg)]) == 2
        assert "unreachable" in capsys.readouterr().err


class TestCompare:
    def test_paired_outputs(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        write_config(cfg)
        out = tmp_path / "cmp"
        assert main(["compare", "--config", str(cfg),
                     "--out-dir", str(out)]) == 0
        rows = read_csv(out / "comparison.csv")
        assert rows[0] == ["metric", "gmomatch", "baseline", "delta"]
        names = [r[0] for r in rows[1:]]
        assert "service_rate" in names
        assert (out / "trip_log_gmomatch.csv").exists()
        assert (out / "trip_log_baseline.csv").exists()
        assert "delta" in capsys.readouterr().out

    def test_single_request_all_deltas_zero(self, tmp_path):
        reqs = tmp_path / "reqs.json"
        reqs.write_text(json.dumps({"requests": [
            {"t_r": 10, "origin": 0, "destination": 8}]}))
        cfg = tmp_path / "cfg.json"
        write_config(cfg, fleet_size=1,
                     demand={"kind": "file", "path": str(reqs)})
        out = tmp_path / "cmp"
        assert main(["compare", "--config", str(cfg),
                     "--out-dir", str(out)]) == 0
        for row in read_csv(out / "comparison.csv")[1:]:
            metric, g, b, delta = row
            if metric.startswith("avg_cost") or metric.startswith(
                    "avg_solution") or metric.startswith("avg_compute"):
                continue  # wall-clock timings differ run to run
            assert delta in ("", "0", "0.0"), (metric, delta)

    def test_burst_scenario_positive_sr_delta(self, tmp_path):
        # five co-located same-direction requests, one vehicle, windows too
        # tight to retry: the one-per-update matcher must lose some
        reqs = tmp_path / "reqs.json"
        reqs.write_text(json.dumps({"requests": [
            {"t_r": 0, "origin": 0, "destination": 2, "flexibility_s": 45}
            for _ in range(5)]}))
        cfg = tmp_path / "cfg.json"
        write_config(cfg, fleet_size=1, capacity=6,
                     demand={"kind": "file", "path": str(reqs)})
        out = tmp_path / "cmp"
        assert main(["compare", "--config", str(cfg),
                     "--out-dir", str(out)]) == 0
        rows = {r[0]: r for r in read_csv(out / "comparison.csv")[1:]}
        delta = float(rows["service_rate"][3])
        assert delta > 0


class TestSweep:
    def write_spec(self, tmp_path, **kw):
        spec = {
            "base": write_config(tmp_path / "unused.json"),
            "axes": kw.pop("axes", {}),
            "seeds": kw.pop("seeds", [1]),
        }
        spec.update(kw)
        path = tmp_path / "sweep.json"
        path.write_text(json.dumps(spec))
        return path

    def test_cross_product_rows(self, tmp_path):
        path = self.write_spec(
            tmp_path, axes={"fleet_size": [2, 3],
                            "matcher": ["gmomatch", "baseline"]},
            seeds=[1, 2, 3])
        out = tmp_path / "out"
        assert main(["sweep", "--config", str(path),
                     "--out-dir", str(out)]) == 0
        rows = read_csv(out / "sweep.csv")
        assert len(rows) == 1 + 12
        header = rows[0]
        for col in ("fleet_size", "matcher", "seed", "status",
                    "service_rate"):
            assert col in header
        assert all(r[header.index("status")] == "ok" for r in rows[1:])

    def test_empty_axes_single_row(self, tmp_path):
        path = self.write_spec(tmp_path)
        out = tmp_path / "out"
        assert main(["sweep", "--config", str(path),
                     "--out-dir", str(out)]) == 0
        assert len(read_csv(out / "sweep.csv")) == 2

    def test_failed_scenario_becomes_row(self, tmp_path):
        base = write_config(tmp_path / "unused.json",
                            demand={"kind": "file",
                                    "path": str(tmp_path / "absent.json")})
        spec = tmp_path / "sweep.json"
        spec.write_text(json.dumps({"base": base, "axes": {},
                                    "seeds": [1, 2]}))
        out = tmp_path / "out"
        assert main(["sweep", "--config", str(spec),
                     "--out-dir", str(out)]) == 1
        rows = read_csv(out / "sweep.csv")
        assert len(rows) == 3
        header = rows[0]
        assert all(r[header.index("status")] == "failed" for r in rows[1:])
        assert all("absent.json" in r[header.index("error")]
                   for r in rows[1:])

    def test_max_runs_cap(self, tmp_path):
        path = self.write_spec(tmp_path, axes={"capacity": [1, 2, 3, 4]},
                               seeds=[1, 2], max_runs=5)
        assert main(["sweep", "--config", str(path),
                     "--out-dir", str(tmp_path / "out")]) == 2

    def test_parallel_jobs_match_serial(self, tmp_path):
        path = self.write_spec(tmp_path, axes={"fleet_size": [2, 3]},
                               seeds=[1, 2])
        out1, out2 = tmp_path / "serial", tmp_path / "parallel"
        assert main(["sweep", "--config", str(path), "--out-dir",
                     str(out1)]) == 0
        assert main(["sweep", "--config", str(path), "--out-dir",
                     str(out2), "--jobs", "2"]) == 0
        serial = read_csv(out1 / "sweep.csv")
        parallel = read_csv(out2 / "sweep.csv")
        timing = {"avg_cost_calculation_s", "avg_solution_s",
                  "avg_compute_s"}
        keep = [i for i, col in enumerate(serial[0]) if col not in timing]
        assert [[r[i] for i in keep] for r in serial] \
            == [[r[i] for i in keep] for r in parallel]

    def test_capacity_axis_shape(self, tmp_path):
        # the three-capacity sensitivity layout: one row per capacity
        path = self.write_spec(tmp_path, axes={"capacity": [4, 6, 10]})
        out = tmp_path / "out"
        assert main(["sweep", "--config", str(path),
                     "--out-dir", str(out)]) == 0
        rows = read_csv(out / "sweep.csv")
        header = rows[0]
        caps = [r[header.index("capacity")] for r in rows[1:]]
        assert caps == ["4", "6", "10"]

    def test_fleet_size_grid_shape(self, tmp_path):
        # five-fleet-size layout at a quarter of the demand
        path = self.write_spec(
            tmp_path, axes={"fleet_size": [210, 230, 250, 270, 290],
                            "demand_scale": [0.25]})
        out = tmp_path / "out"
        assert main(["sweep", "--config", str(path),
                     "--out-dir", str(out)]) == 0
        rows = read_csv(out / "sweep.csv")
        header = rows[0]
        fleets = [r[header.index("fleet_size")] for r in rows[1:]]
        assert fleets == ["210", "230", "250", "270", "290"]
        assert all(r[header.index("demand_scale")] == "0.25"
                   for r in rows[1:])
        assert all(r[header.index("status")] == "ok" for r in rows[1:])


class TestEntryPoint:
    def test_console_script_version(self):
        proc = subprocess.run([sys.executable, "-m", "ridematch.cli",
                               "--version"], capture_output=True, text=True)
        assert proc.returncode == 0


def test_unknown_command_rejected(capsys):
    with pytest.raises(SystemExit):
        main(["frobnicate"])
