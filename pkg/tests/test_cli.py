import csv
import json

import numpy as np
import pytest

from curvednbody.cli import main, read_trajectory


def write_config(path, payload):
    payload.setdefault("schema_version", 1)
    path.write_text(json.dumps(payload))
    return str(path)


def lagrangian_config(tmp_path, **extra):
    cfg = {
        "catalog": {"name": "lagrangian_s3", "params": {"r": 0.5}},
        "t_end": 5.0,
        "samples": 20,
        "output": {"trajectory": str(tmp_path / "traj.csv"),
                   "report": str(tmp_path / "report.json")},
    }
    cfg.update(extra)
    return write_config(tmp_path / "config.json", cfg)


class TestSimulate:
    def test_lagrangian_run(self, tmp_path):
        cfg = lagrangian_config(tmp_path)
        assert main(["simulate", "--config", cfg]) == 0
        report = json.loads((tmp_path / "report.json").read_text())
        assert report["status"] == "completed"
        assert report["drift"]["h_rel"] < 1e-8
        assert report["drift"]["c_abs"] < 1e-8
        assert report["classification"] == "circle_motion"
        with open(tmp_path / "traj.csv", newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["t", "body", "w", "x", "y", "z",
                           "vw", "vx", "vy", "vz"]
        assert len(rows) == 1 + 20 * 3

    def test_seventeen_digit_round_trip(self, tmp_path):
        cfg = lagrangian_config(tmp_path)
        main(["simulate", "--config", cfg])
        times, q, v = read_trajectory(str(tmp_path / "traj.csv"))
        # re-parse equals the binary doubles of a fresh run's first sample
        from curvednbody.equilibria import catalog, initial_state
        state0 = initial_state(catalog("lagrangian_s3", r=0.5))
        np.testing.assert_array_equal(q[0], state0.q)

    def test_round_trip_reintegration(self, tmp_path):
        cfg = lagrangian_config(tmp_path)
        main(["simulate", "--config", cfg])
        times, q, v = read_trajectory(str(tmp_path / "traj.csv"))
        cfg2 = write_config(tmp_path / "config2.json", {
            "kappa": 1.0,
            "masses": [1.0, 1.0, 1.0],
            "initial": {"positions": q[0].tolist(),
                        "velocities": v[0].tolist()},
            "t_end": 5.0,
            "samples": 20,
            "output": {"trajectory": str(tmp_path / "traj2.csv"),
                       "report": str(tmp_path / "report2.json")},
        })
        assert main(["simulate", "--config", cfg2]) == 0
        times2, q2, v2 = read_trajectory(str(tmp_path / "traj2.csv"))
        np.testing.assert_allclose(times2, times, atol=1e-12)
        np.testing.assert_allclose(q2, q, atol=1e-6)

    def test_collision_config_rejected(self, tmp_path, capsys):
        p = np.array([[1.0, 0, 0, 0]])
        cfg = write_config(tmp_path / "bad.json", {
            "kappa": 1.0, "masses": [1.0, 1.0],
            "initial": {"positions": [p[0].tolist(), p[0].tolist()],
                        "velocities": [[0, 0, 0, 0], [0, 0, 0, 0]]},
            "t_end": 1.0,
        })
        assert main(["simulate", "--config", cfg]) == 2
        assert "Collision(0,1)" in capsys.readouterr().err

    def test_zero_curvature_rejected(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "bad.json", {
            "kappa": 0.0, "masses": [1.0],
            "initial": {"positions": [[1, 0, 0, 0]],
                        "velocities": [[0, 0, 0, 0]]},
            "t_end": 1.0,
        })
        assert main(["simulate", "--config", cfg]) == 2
        assert "nonzero" in capsys.readouterr().err

    def test_bad_schema_version(self, tmp_path):
        cfg = write_config(tmp_path / "bad.json", {"schema_version": 99})
        assert main(["simulate", "--config", cfg]) == 2

    def test_singularity_stop_exit_code(self, tmp_path):
        # collapsing triangle: integration must stop with exit 3
        z0 = 0.9
        rho = np.sqrt(1 - z0 * z0)
        ang = [0.0, 2 * np.pi / 3, 4 * np.pi / 3]
        cfg = write_config(tmp_path / "collapse.json", {
            "kappa": 1.0, "masses": [1.0] * 3,
            "initial": {
                "positions": [[rho * np.cos(a), rho * np.sin(a), 0.0, z0]
                              for a in ang],
                "velocities": [[0.0] * 4] * 3,
            },
            "t_end": 50.0,
            "output": {"trajectory": str(tmp_path / "t.csv"),
                       "report": str(tmp_path / "r.json")},
        })
        assert main(["simulate", "--config", cfg]) == 3
        report = json.loads((tmp_path / "r.json").read_text())
        assert report["status"] == "singularity_approach"
        assert report["singularity_stop"]["margin"] < 1e-6


class TestVerify:
    def test_pentatope_passes_with_condition(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "v.json", {
            "catalog": {"name": "pentatope_double"},
            "output": {"report": str(tmp_path / "verify.json")},
        })
        assert main(["verify", "--config", cfg]) == 0
        payload = json.loads((tmp_path / "verify.json").read_text())
        assert payload["passed"] is True
        assert payload["condition"] == "|alpha|=|beta|"
        assert len(payload["residuals"]) == 5

    def test_perturbed_pentatope_fails(self, tmp_path):
        from curvednbody.equilibria import catalog
        spec = catalog("pentatope_double")
        coords = spec.coords0.copy()
        # advance one rotation phase by 1e-3
        w, x = coords[2, 0], coords[2, 1]
        c, s = np.cos(1e-3), np.sin(1e-3)
        coords[2, 0] = w * c - x * s
        coords[2, 1] = w * s + x * c
        cfg = write_config(tmp_path / "v.json", {
            "respec": {"kind": spec.kind.value, "kappa": 1.0,
                       "masses": spec.masses.tolist(),
                       "coords0": coords.tolist(),
                       "alpha": spec.alpha, "beta": spec.beta},
            "output": {"report": str(tmp_path / "verify.json")},
        })
        assert main(["verify", "--config", cfg]) == 5
        payload = json.loads((tmp_path / "verify.json").read_text())
        assert payload["passed"] is False
        assert payload["max_abs"] > 1e-9

    def test_parabolic_ansatz_report(self, tmp_path):
        cfg = write_config(tmp_path / "v.json", {
            "respec": {"kind": "neg_parabolic", "n": 3, "kappa": -1.0},
            "output": {"report": str(tmp_path / "verify.json")},
        })
        assert main(["verify", "--config", cfg, "--seed", "5"]) == 0
        payload = json.loads((tmp_path / "verify.json").read_text())
        assert abs(payload["evidence"]["drift_rate"]) > 1e-10

    def test_seed_reproducible(self, tmp_path):
        cfg = write_config(tmp_path / "v.json", {
            "respec": {"kind": "neg_parabolic", "n": 3, "kappa": -1.0},
            "output": {"report": str(tmp_path / "verify.json")},
        })
        values = []
        for _ in range(2):
            main(["verify", "--config", cfg, "--seed", "11"])
            values.append(json.loads(
                (tmp_path / "verify.json").read_text())["evidence"]["drift_rate"])
        assert values[0] == values[1]


class TestCatalogCommand:
    def test_list(self, capsys):
        assert main(["catalog", "list"]) == 0
        out = capsys.readouterr().out
        assert "lagrangian_s3" in out and "elliptic_hyperbolic_h3" in out

    def test_emit_round_trip(self, tmp_path):
        out = tmp_path / "orbit.json"
        assert main(["catalog", "emit", "six_double", "--params",
                     '{"beta": 2.0}', "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        assert payload["respec"]["beta"] == 2.0
        # the emitted file is itself a valid verify/simulate config
        assert main(["verify", "--config", str(out), "--out",
                     str(tmp_path / "v.json")]) == 0

    def test_unknown_name(self, capsys):
        assert main(["catalog", "emit", "nonsense"]) == 2


class TestClassifyCommand:
    def test_classify_trajectory(self, tmp_path, capsys):
        cfg = lagrangian_config(tmp_path)
        main(["simulate", "--config", cfg])
        assert main(["classify", str(tmp_path / "traj.csv")]) == 0
        assert "circle_motion" in capsys.readouterr().out

    def test_kappa_inferred_negative(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "c.json", {
            "catalog": {"name": "lagrangian_h3"},
            "t_end": 3.0, "samples": 12,
            "output": {"trajectory": str(tmp_path / "h.csv"),
                       "report": str(tmp_path / "hr.json")},
        })
        main(["simulate", "--config", cfg])
        out = tmp_path / "cls.json"
        assert main(["classify", str(tmp_path / "h.csv"), "--out",
                     str(out)]) == 0
        payload = json.loads(out.read_text())
        assert payload["kappa"] == pytest.approx(-1.0, abs=1e-9)
        assert payload["tag"] == "circle_motion"


class TestScanCommand:
    def test_parameter_validation(self, capsys):
        assert main(["scan-stability", "--steps", "1"]) == 2
        assert "at least 8" in capsys.readouterr().err
        assert main(["scan-stability", "--r-max", "1.0", "--steps", "10"]) == 2

    def test_small_window_scan(self, tmp_path, capsys):
        out = tmp_path / "scan.csv"
        trans = tmp_path / "transitions.json"
        assert main(["scan-stability", "--r-min", "0.60", "--r-max", "0.66",
                     "--steps", "8", "--out", str(out),
                     "--transitions-out", str(trans)]) == 0
        with open(out, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["r", "max_off_unit", "classification"]
        assert len(rows) == 9
        assert all(r[2] == "TotallyElliptic" for r in rows[1:])
        assert json.loads(trans.read_text())["transitions"] == []
