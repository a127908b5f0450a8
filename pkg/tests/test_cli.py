import json
import math

from lplimits.cli import SEED_ENV_VAR, main

INV_E = 1.0 / math.e


def run_cli(capsys, *args):
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_solve_json(capsys):
    code, out, _ = run_cli(capsys, "solve", "--family", "ranking:8", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["status"] == "optimal"
    assert payload["certified"] is True
    assert payload["n"] == 8


def test_solve_dump_roundtrip(capsys, tmp_path):
    path = tmp_path / "lp.txt"
    code, _, _ = run_cli(capsys, "solve", "--family", "toy:3",
                         "--dump-lp", str(path))
    assert code == 0
    header = path.read_text().splitlines()[0].split()
    assert header == ["minimize", "3", "5"]


def test_bad_family_is_json_error(capsys):
    code, _, err = run_cli(capsys, "solve", "--family", "nope:3")
    assert code != 0
    payload = json.loads(err)
    assert "error" in payload and payload["type"] == "LpInputError"


def test_sweep_csv_and_extrapolate(capsys, tmp_path):
    path = tmp_path / "sweep.csv"
    code, out, _ = run_cli(capsys, "sweep", "--family", "toy",
                           "--sizes", "4,8,16,32", "--out", str(path),
                           "--extrapolate", "--json")
    assert code == 0
    payload = json.loads(out)
    assert abs(payload["extrapolated_limit"] - (1 - INV_E)) < 1e-2
    assert path.read_text().startswith("family,n,value,status,ms")


def test_ode_writes_trajectory(capsys, tmp_path):
    path = tmp_path / "traj.csv"
    code, out, _ = run_cli(capsys, "ode", "--kind", "ranking",
                           "--step", "0.001", "--out", str(path))
    assert code == 0
    lines = path.read_text().strip().split("\n")
    assert lines[0] == "t,value"
    assert len(lines) == 1002
    t, v = lines[-1].split(",")
    assert float(t) == 1.0
    assert abs(float(v) - (1 - INV_E)) < 1e-10


def test_vc_check(capsys):
    code, out, _ = run_cli(capsys, "vc-check", "--profile", "RankingG",
                           "--family", "ranking:400")
    assert code == 0
    assert "max constraint violation" in out


def test_kkt_check_with_perturbation(capsys):
    code, out, _ = run_cli(capsys, "kkt-check", "--grid", "5000",
                           "--perturb", "0.01")
    assert code == 0
    assert "pass: True" in out
    assert "pass: False" in out


def test_interval_search_json_keys(capsys):
    code, out, _ = run_cli(capsys, "interval-search", "--k", "1",
                           "--resolution", "0.01", "--json")
    assert code == 0
    payload = json.loads(out)
    assert set(payload) == {"K", "resolution", "best_s", "best_value",
                            "grid_points_evaluated"}
    assert abs(payload["best_value"] - INV_E) < 1e-6


def test_simulate_ranking_json(capsys):
    code, out, _ = run_cli(capsys, "simulate", "ranking", "--planted", "20,1",
                           "--trials", "2000", "--seed", "3", "--json")
    assert code == 0
    payload = json.loads(out)
    assert set(payload) == {"trials", "estimate", "std_error", "seed"}
    assert payload["seed"] == 3
    assert 0 < payload["estimate"] <= 20


def test_simulate_balance(capsys):
    code, out, _ = run_cli(capsys, "simulate", "balance", "--planted", "20,20",
                           "--slabs", "10")
    assert code == 0
    assert "slab_audit: pass" in out


def test_simulate_secretary_policy(capsys):
    code, out, _ = run_cli(capsys, "simulate", "secretary",
                           "--policy-from-lp", "20", "--trials", "5000",
                           "--seed", "1", "--json")
    assert code == 0
    payload = json.loads(out)
    assert abs(payload["estimate"] - 0.38) < 0.05


def test_seed_env_override(capsys, monkeypatch):
    monkeypatch.setenv(SEED_ENV_VAR, "777")
    code, out, _ = run_cli(capsys, "simulate", "ranking", "--planted", "10,1",
                           "--trials", "500", "--json")
    assert code == 0
    assert json.loads(out)["seed"] == 777


def test_simulate_instance_file(capsys, tmp_path):
    from lplimits import triangular_instance
    from lplimits.online_sim import write_instance

    path = tmp_path / "inst.txt"
    write_instance(triangular_instance(6, 1), path)
    code, out, _ = run_cli(capsys, "simulate", "ranking", "--instance",
                           str(path), "--trials", "400", "--seed", "2",
                           "--json")
    assert code == 0
    assert json.loads(out)["trials"] == 400
