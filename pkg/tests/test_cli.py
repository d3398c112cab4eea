import json

import pytest

from juggle.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_states(capsys):
    code, data = run_json(capsys, "states", "--model", "mjmc", "-h", "4", "-k", "2")
    assert code == 0
    assert data["states"] == ["bboo", "bobo", "boob", "obbo", "obob", "oobb"]
    code, data = run_json(capsys, "states", "--model", "enriched", "-H", "3", "-K", "2")
    assert sorted(data["states"]) == ["1,2|3", "1|2,3", "2|1,3"]


def test_matrix_json(capsys):
    code, data = run_json(capsys, "matrix", "--model", "mjmc", "-h", "2", "-k", "1", "--xs", "1/3,2/3")
    assert code == 0
    assert data["states"] == ["bo", "ob"]
    assert data["rows"][0] == [[0, "1/3"], [1, "2/3"]]


def test_stationary_oracle(capsys):
    code, out, _ = run(capsys, "stationary", "--model", "mjmc", "-h", "4", "-k", "2", "--xs", "1/2,1/4,1/4", "--oracle")
    assert code == 0 and "equal=true" in out
    code, data = run_json(capsys, "stationary", "--model", "enriched", "-H", "4", "-K", "2", "--oracle")
    assert code == 0 and data["equal"] is True
    assert sum(data["closed_form"]["floats"]) == pytest.approx(1)


def test_stationary_csv(capsys):
    code, out, _ = run(capsys, "stationary", "--model", "annihilation", "-h", "2", "--family", "uniform", "--csv")
    assert code == 0
    assert out.splitlines()[0] == "state,exact,float" and len(out.splitlines()) == 5


def test_reducible_report(capsys):
    code, out, _ = run(capsys, "stationary", "--model", "mjmc", "-h", "4", "-k", "2", "--xs", "0,0,1",
                       "--allow-reducible", "--oracle")
    assert code == 0
    assert out.startswith("not unique: nullity 2") and out.count("{") == 2
    code, data = run_json(capsys, "stationary", "--model", "mjmc", "-h", "4", "-k", "2", "--xs", "0,0,1",
                          "--allow-reducible", "--oracle")
    assert data["oracle"]["unique"] is False
    assert len(data["oracle"]["closed_classes"]) >= 2


def test_reducible_needs_flag(capsys):
    code, _, err = run(capsys, "stationary", "--model", "mjmc", "-h", "4", "-k", "2", "--xs", "0,0,1")
    assert code == 2 and "x_0 = 0" in err


def test_z(capsys):
    code, out, _ = run(capsys, "z", "--model", "mjmc", "-h", "4", "-k", "2", "--xs", "1,1,1")
    assert code == 0 and out.strip() == "25"
    code, out, _ = run(capsys, "z", "--model", "mjmc", "-h", "4", "-k", "2", "--xs", "1,1,1", "--method", "words")
    assert out.strip() == "25"
    code, data = run_json(capsys, "z", "--model", "umjmc", "-l", "1", "--family", "geometric", "--q", "1/2")
    assert code == 0 and data["value_float"] == pytest.approx(2)


def test_special(capsys):
    code, data = run_json(capsys, "special", "-h", "5", "--q", "1/3")
    assert code == 0 and data["passed"]
    assert len(data["results"]) == 4 * 6


def test_verify_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "annihilation", "-h", "3")
    assert code == 0 and "checks passed" in out
    code, data = run_json(capsys, "verify", "--suite", "combinat", "--suite", "linalg", "-h", "4")
    assert data["passed"] and {r["suite"] for r in data["results"]} == {"combinat", "linalg"}


def test_simulate_seed_env(capsys, monkeypatch):
    argv = ["simulate", "--model", "mjmc", "-h", "3", "-k", "1", "--steps", "20", "--replicas", "50"]
    _, a = run_json(capsys, *argv, "--seed", "5")
    monkeypatch.setenv("JUGGLE_SEED", "5")
    _, b = run_json(capsys, *argv, "--seed", "99")
    assert a["empirical"] == b["empirical"] and b["config"]["seed"] == 5
    assert b["config"]["prng"] == "numpy.random.PCG64"
    assert "tv" in b and "exact" in b


def test_simulate_strong(capsys):
    code, data = run_json(capsys, "simulate", "--model", "doubly-enriched", "-h", "2", "--zs", "1/5,3/10,1/2",
                          "--strong", "--trials", "500")
    assert code == 0 and data["passed"]


def test_project(capsys):
    code, out, _ = run(capsys, "project", "--map", "phi-tilde", "--state", "32")
    assert out.strip() == "2|1,3"
    code, out, _ = run(capsys, "project", "--map", "phi", "--state", "13")
    assert out.strip() == "bo"
    code, out, _ = run(capsys, "project", "--map", "psi", "--state", "1|3,5,6|2,4,7,8")
    assert out.strip() == "obbbbob"
    code, data = run_json(capsys, "project", "--map", "phi-tilde", "-h", "2", "--family", "uniform", "--check")
    assert code == 0 and data["intertwining"] is True
    code, data = run_json(capsys, "project", "--map", "psi", "-H", "4", "-K", "2", "--check")
    assert code == 0 and data["intertwining"] is True


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["states"],
        ["states", "--model", "mjmc", "-h", "2", "-k", "5"],
        ["matrix", "--model", "mjmc", "-h", "2", "-k", "1", "--xs", "1/2,1/3"],
        ["matrix", "--model", "umjmc", "-l", "2", "--family", "geometric", "--q", "1/2"],
        ["stationary", "--model", "mjmc", "-h", "2", "-k", "1", "--xs", "a,b"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_help(capsys):
    with pytest.raises(SystemExit) as e:
        main(["--help"])
    assert e.value.code == 0
    assert "stationary" in capsys.readouterr().out
