import json
import subprocess
import sys

import pytest

from constellation_routing.cli import main
from constellation_routing.bench import load_results


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_route_with_target(capsys):
    code, out, _ = run(capsys, "route", "--planes", "4", "--slots", "4", "--from", "0,0", "--to", "2,2")
    assert code == 0
    assert "distance: 4\n" in out
    path = out.split("path: ")[1].splitlines()[0].split(" -> ")
    assert len(path) == 5 and path[0] == "0,0" and path[-1] == "2,2"
    assert "relaxations: 64" in out


def test_route_to_self(capsys):
    code, out, _ = run(capsys, "route", "--planes", "3", "--slots", "5", "--from", "0,0", "--to", "0,0")
    assert code == 0
    assert "distance: 0\n" in out
    assert "path: 0,0\n" in out


@pytest.mark.parametrize("algo", ["percolation", "naive", "heap"])
def test_route_algorithms_and_flat_ids(capsys, algo):
    code, out, _ = run(capsys, "route", "--planes", "6", "--slots", "6", "--from", "0", "--to", "21", "--algorithm", algo)
    assert code == 0 and "distance: 6\n" in out


def test_route_without_target(capsys):
    code, out, _ = run(capsys, "route", "--planes", "3", "--slots", "3")
    assert code == 0 and "max distance: 2" in out


def test_route_rejects_small_plane_count(capsys):
    code, out, err = run(capsys, "route", "--planes", "2", "--slots", "4")
    assert code == 2
    assert out == ""
    assert err.count("\n") == 1 and err.startswith("error:") and "planes must be >= 3" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["route", "--planes", "4", "--slots", "4", "--to", "9,9"],
        ["route", "--planes", "4", "--slots", "4", "--from", "x"],
        ["route", "--slots", "4"],
        ["route", "--planes", "4", "--slots", "4", "--weights", "uniform", "--lo", "2", "--hi", "1"],
        ["bench", "--sweep"],
        ["bench", "--out", "x.csv"],
        ["estimate-x", "--planes", "3", "--slots", "3", "--trials", "0"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_two_with_one_line(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.count("\n") == 1 and err.startswith("error: ")


def test_route_uniform_weights(capsys):
    code, out, _ = run(capsys, "route", "--planes", "5", "--slots", "5", "--weights", "uniform", "--seed", "3", "--to", "2,2")
    assert code == 0 and "distance: " in out


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "grid.cfg"
    cfg.write_text("planes=4\nslots=4\nseam=seam\n")
    code, out, _ = run(capsys, "route", "--config", str(cfg), "--from", "0,0", "--to", "3,0")
    assert code == 0 and "distance: 3\n" in out
    code, _, err = run(capsys, "route", "--config", str(tmp_path / "nope.cfg"))
    assert code == 2 and "nope.cfg" in err


def test_bench_typical_json(tmp_path, capsys):
    dest = tmp_path / "t.json"
    code, out, err = run(capsys, "bench", "--typical", "--out", str(dest))
    assert code == 0
    records = load_results(dest)
    assert len(records) == 12
    assert "median_ns" in err and "median_ns" not in out


def test_bench_sweep_csv(tmp_path, capsys):
    dest = tmp_path / "results.csv"
    code, out, _ = run(capsys, "bench", "--sweep", "--out", str(dest))
    assert code == 0
    assert len(dest.read_text().splitlines()) == 1 + 102
    assert "op-count crossover vs heap" in out


def test_bench_unwritable_destination_is_runtime_error(tmp_path, capsys):
    code, _, err = run(capsys, "bench", "--typical", "--out", str(tmp_path / "no" / "t.csv"))
    assert code == 1 and err.count("\n") == 1


def test_estimate_x_byte_stable(capsys):
    argv = ["estimate-x", "--planes", "18", "--slots", "36", "--trials", "100", "--seed", "7"]
    code, first, _ = run(capsys, *argv)
    assert code == 0
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert "reference_ratio: 0.133333" in first
    ratio = float(first.split("ratio_to_n: ")[1].split()[0])
    assert 0 < ratio < 1


def test_generate(capsys):
    code, out, _ = run(capsys, "generate", "--planes", "3", "--slots", "4", "--seam", "seam")
    assert code == 0
    dump = json.loads(out)
    assert dump["n"] == 12 and dump["edges"] == 2 * 12 - 4


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "constellation_routing", "route", "--planes", "3", "--slots", "3", "--to", "1,1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "distance: 2" in proc.stdout
