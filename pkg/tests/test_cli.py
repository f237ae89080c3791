import csv
import io
import json
import subprocess
import sys

import pytest

from hyperchroma import load
from hyperchroma.cli import main
from hyperchroma.process import read_trace_csv
from hyperchroma.verify import read_report_csv


@pytest.fixture
def fano_file(tmp_path):
    path = tmp_path / "fano.hgt"
    assert main(["gen", "fano", "--out", str(path)]) == 0
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


def test_stats_fano(capsys, fano_file):
    code, out = run(capsys, "stats", fano_file)
    assert code == 0
    assert "Delta_3 = 3" in out and "Delta_{3,2} = 1" in out
    assert "Gamma_2 = 0" in out


def test_color_exact(capsys, fano_file):
    code, out = run(capsys, "color", fano_file, "--method", "exact")
    assert code == 0 and "chi = 3" in out


def test_color_rankk_writes_proper_coloring(capsys, tmp_path, fano_file):
    out_path = tmp_path / "col.json"
    code, out = run(capsys, "color", fano_file, "--method", "rankk", "--seed", 4, "--out", out_path)
    assert code == 0 and "r = 9" in out
    data = json.loads(out_path.read_text())
    from hyperchroma import check_proper

    assert check_proper(load(fano_file), data["coloring"]).ok


def test_seqclaim(capsys):
    code, out = run(capsys, "verify", "seqclaim", "--a", 2, "--b", 2, "--m", 6, "--g", 1, "--d0", "1e6", "--steps", 20)
    assert code == 0 and "seqclaim: pass" in out


def test_unknown_subcommand():
    assert main(["bogus"]) == 2


def test_unknown_flag(fano_file):
    assert main(["stats", str(fano_file), "--nope"]) == 2


def test_missing_seed(capsys, fano_file):
    assert main(["greedy", str(fano_file)]) == 2
    assert main(["gen", "uniform_random", "--n", "10", "--m", "5"]) == 2


def test_missing_file(capsys):
    assert main(["stats", "/nonexistent/file.hgt"]) == 2


def test_hypothesis_failure_is_input_error(capsys, fano_file):
    assert main(["color", str(fano_file), "--method", "cortri", "--f", "2", "--seed", "1"]) == 2


def test_bad_log_level(monkeypatch, fano_file):
    monkeypatch.setenv("HYPERCHROMA_LOG", "loud")
    assert main(["stats", str(fano_file)]) == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "uniform_random", "--n", "20", "--m", "30", "--k", "3", "--seed", "5"],
        ["gen", "partial_steiner", "--n", "25", "--k", "3", "--seed", "5"],
    ],
)
def test_gen_byte_identical(tmp_path, argv):
    a, b = tmp_path / "a.hgt", tmp_path / "b.hgt"
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert load(a) == load(b)


def test_gen_json_round_trip(tmp_path):
    path = tmp_path / "g.json"
    assert main(["gen", "triangle_of_Kn", "--n", "6", "--out", str(path)]) == 0
    G = load(path)
    assert G.vertex_count == 15 and len(G) == 20


def test_greedy_outputs(tmp_path, capsys, fano_file):
    summary, trace = tmp_path / "s.csv", tmp_path / "t.csv"
    args = ["greedy", str(fano_file), "--trials", "5", "--seed", "3", "--out", str(summary), "--trace", str(trace)]
    assert main(args) == 0
    rows = list(csv.DictReader(io.StringIO(summary.read_text())))
    assert [int(r["size"]) for r in rows] == [4] * 5
    tr = read_trace_csv(trace.read_text())
    assert len(tr) == 4


def test_greedy_jobs_do_not_change_output(tmp_path, fano_file):
    one, two = tmp_path / "one.csv", tmp_path / "two.csv"
    base = ["greedy", str(fano_file), "--trials", "6", "--seed", "9"]
    assert main(base + ["--out", str(one)]) == 0
    assert main(base + ["--jobs", "2", "--out", str(two)]) == 0
    assert one.read_bytes() == two.read_bytes()


def test_partition_json(tmp_path, capsys, fano_file):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    base = ["partition", str(fano_file), "--patterns", "triangles", "--eps", "0.2", "--seed", "2"]
    assert main(base + ["--out", str(a)]) == 0
    assert main(base + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    assert all(c["ok"] for c in data["certificates"])
    assert sorted(v for p in data["parts"] for v in p) == list(range(7))


def test_verify_csv_round_trip(tmp_path, capsys, fano_file):
    out = tmp_path / "r.csv"
    args = ["verify", "tail", "--file", str(fano_file), "--p", "0.05", "--c", "40", "--trials", "200", "--seed", "1", "--out", str(out)]
    assert main(args) == 0
    rows = read_report_csv(out.read_text())
    assert rows[0].name == "tau_tail"
    again = tmp_path / "r2.csv"
    assert main(args[:-1] + [str(again)]) == 0
    assert out.read_bytes() == again.read_bytes()


def test_verify_moments(tmp_path, capsys):
    path = tmp_path / "singletons.hgt"
    path.write_text("1 3\n0\n1\n2\n")
    code, out = run(capsys, "verify", "moments", "--file", path, "--p", 0.5)
    assert code == 0 and "M = 1.5 1" in out


def test_module_entry_point(fano_file):
    out = subprocess.run(
        [sys.executable, "-m", "hyperchroma", "stats", str(fano_file)], capture_output=True, text=True, check=True
    )
    assert "Delta_3 = 3" in out.stdout
