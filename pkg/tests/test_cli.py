import csv

import numpy as np
import pytest

from qcdisc import channels as ch
from qcdisc import jsonio
from qcdisc.cli import main

ZERO = np.diag([1.0, 0.0]).astype(complex)


@pytest.fixture
def files(tmp_path, rng):
    paths = {}
    for name, rho in {"zero": ZERO, "mixed": np.eye(2) / 2, "r": np.array([[0.7, 0.2 + 0.1j], [0.2 - 0.1j, 0.3]])}.items():
        paths[name] = str(tmp_path / f"{name}.json")
        jsonio.save_state(paths[name], rho)
    chans = {
        "cqA": ch.make_cq([ZERO, np.eye(2) / 2]),
        "cqB": ch.make_cq([np.diag([0.6, 0.4]), np.diag([0.3, 0.7])]),
        "x": ch.unitary_channel(np.array([[0, 1], [1, 0]])),
        "z": ch.unitary_channel(np.diag([1, -1])),
        "dep": ch.depolarizing(0.3),
        "amp": ch.make_gad(0.6, 0.0),
    }
    for name, N in chans.items():
        paths[name] = str(tmp_path / f"{name}.json")
        jsonio.save_channel(paths[name], N)
    return paths


def test_div(files, capsys):
    assert main(["div", "relative", files["r"], files["r"]]) == 0
    assert capsys.readouterr().out.strip() == "0.000000000000"
    assert main(["div", "max", files["zero"], files["mixed"]]) == 0
    assert capsys.readouterr().out.strip() == "1.000000000000"
    main(["div", "sandwiched", files["r"], files["mixed"], "--alpha", "0.5"])
    a = capsys.readouterr().out
    main(["div", "fidelity", files["r"], files["mixed"]])
    assert capsys.readouterr().out == a
    main(["div", "relative", files["mixed"], files["zero"]])
    assert capsys.readouterr().out.strip() == "inf"


def test_div_errors(files, tmp_path):
    assert main(["div", "relative", str(tmp_path / "missing.json"), files["r"]]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["div", "relative", str(bad), files["r"]]) == 2
    assert main(["div", "petz", files["r"], files["r"]]) == 2


def test_bounds(files, capsys, tmp_path):
    assert main(["bounds", "stein", files["cqA"], files["cqB"]]) == 0
    assert capsys.readouterr().out.splitlines()[2].rstrip().endswith("true")
    out = tmp_path / "b.csv"
    assert main(["bounds", "chernoff", files["dep"], files["amp"], "--multistarts", "4", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert float(rows[0]["lower"]) <= float(rows[0]["upper"])
    capsys.readouterr()
    assert main(["bounds", "stein", files["dep"], files["dep"]]) == 0
    assert capsys.readouterr().out.splitlines()[2].split()[2] == "0.0"
    assert main(["bounds", "hoeffding", files["cqA"], files["cqB"]]) == 2  # needs --rate


def test_gad(tmp_path, capsys):
    assert main(["gad", "0.2", "0.3", "--grid", "21", "--out", str(tmp_path)]) == 0
    path = tmp_path / "gad_0.2_0.3.csv"
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 441
    assert list(rows[0]) == ["p1", "p2", "lower", "upper", "diff"]
    assert all(float(r["diff"]) >= -1e-8 for r in rows)
    assert (tmp_path / "plot_gad_0.2_0.3.py").exists()
    first = path.read_bytes()
    assert main(["gad", "0.2", "0.3", "--grid", "21", "--out", str(tmp_path)]) == 0
    assert path.read_bytes() == first

    assert main(["gad", "0.5", "0.5", "--grid", "2", "--out", str(tmp_path)]) == 0
    rows = list(csv.DictReader((tmp_path / "gad_0.5_0.5.csv").open()))
    assert len(rows) == 4 and "env_upper" in rows[0]
    assert main(["gad", "0.5", "0.5", "--grid", "1"]) == 2


def test_simulate(files, capsys):
    assert main(["simulate", files["dep"], files["dep"], "--n", "1", "--multistarts", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert float(lines[3].split()[3]) == pytest.approx(0.5, abs=1e-6)
    assert main(["simulate", files["cqA"], files["cqB"], "--n", "2", "--multistarts", "1"]) == 0
    out = capsys.readouterr().out
    slacks = [float(l.split(":")[1]) for l in out.splitlines() if l.startswith("  ")]
    assert slacks and min(slacks) >= -1e-6
    assert main(["simulate", files["x"], files["z"], "--n", "1", "--multistarts", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert float(lines[3].split()[3]) < 1e-6
    assert main(["simulate", files["x"], files["z"], "--n", "4"]) == 2
    assert main(["simulate", files["x"], files["z"], "--memory-cap", "9"]) == 2


def test_check(capsys):
    assert main(["check", "channels"]) == 0
    assert "4/4 properties passed" in capsys.readouterr().out
    with pytest.raises(SystemExit) as e:
        main(["check", "nonsense"])
    assert e.value.code == 2
