import csv
import io
import json
import math

import pytest

from nodalcurve.cli import EXIT_BREACH, EXIT_IO, EXIT_OK, EXIT_USAGE, main


def run(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(text):
    return list(csv.DictReader(line for line in io.StringIO(text) if not line.startswith("#")))


def test_sweep_ex2_counts(capsys):
    code, out, _ = run(["zeros", "sweep", "--family", "EX2", "--curve", "horocycle:1", "--params", "4,8,16",
                        "--no-timestamp"], capsys)
    assert code == EXIT_OK
    assert [int(float(r["exact_count"])) for r in rows_of(out)] == [8, 16, 32]


def test_empty_list_gives_header_only(capsys):
    code, out, _ = run(["zeros", "sweep", "--family", "RANDOM", "--curve", "horocycle:1", "--params", "",
                        "--no-timestamp"], capsys)
    assert code == EXIT_OK
    body = [line for line in out.splitlines() if not line.startswith("#")]
    assert len(body) == 1 and body[0].startswith("param")


def test_reruns_are_byte_identical(capsys, tmp_path):
    base = ["zeros", "sweep", "--family", "RANDOM", "--curve", "horocycle:1", "--params", "6,9",
            "--seed", "3", "--no-timestamp"]
    outs = []
    for i, threads in enumerate(("1", "2")):
        path = tmp_path / f"run{i}.csv"
        assert run(base + ["--threads", threads, "--out", str(path)], capsys)[0] == EXIT_OK
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_json_mirrors_csv(capsys):
    args = ["specfun", "eval", "--tau", "5", "--x", "1,3", "--no-timestamp"]
    _, text, _ = run(args, capsys)
    _, js, _ = run(args + ["--format", "json"], capsys)
    doc = json.loads(js)
    table = rows_of(text)
    assert doc["columns"] == list(table[0])
    for row, jrow in zip(table, doc["rows"]):
        for col, v in zip(doc["columns"], jrow):
            if isinstance(v, float):
                assert float(row[col]) == v
            elif v is None:
                assert math.isnan(float(row[col]))


def test_flags_work_before_and_after_subcommand(capsys):
    a = run(["--format", "json", "--no-timestamp", "afe", "psi", "--x", "3"], capsys)
    b = run(["afe", "psi", "--x", "3", "--format", "json", "--no-timestamp"], capsys)
    assert a[0] == b[0] == EXIT_OK and a[1] == b[1]


def test_afe_check_passes(capsys):
    code, out, _ = run(["afe", "check", "--profiles", "3", "--X", "5", "--no-timestamp"], capsys)
    assert code == EXIT_OK
    assert all(float(r["rel_diff"]) <= 1e-6 for r in rows_of(out))


def test_afe_check_breach_exit(capsys):
    code, _, _ = run(["afe", "check", "--coeffs", "1,0.5", "--X", "2", "--rtol", "1e-30", "--no-timestamp"], capsys)
    assert code == EXIT_BREACH


def test_equidist_decays(capsys):
    code, out, _ = run(["equidist", "--tau", "5", "--r", "1:15", "--no-timestamp"], capsys)
    assert code == EXIT_OK
    vals = [float(r[k]) for r in rows_of(out) for k in r if k not in ("r",) and "abs" in k]
    assert vals[-1] <= 0.01 * vals[0]


def test_wave_round_trip_through_files(capsys, tmp_path):
    path = tmp_path / "w.txt"
    assert run(["wave", "make", "--family", "EX2", "--n", "6", "--out", str(path)], capsys)[0] == EXIT_OK
    code, out, _ = run(["zeros", "count", "--wave", str(path), "--curve", "horocycle:1", "--no-timestamp"], capsys)
    assert code == EXIT_OK
    assert int(float(rows_of(out)[0]["exact_count"])) == 12
    assert run(["cert", "--wave", str(path), "--curve", "horocycle:1"], capsys)[0] == EXIT_OK


@pytest.mark.parametrize("argv", [
    ["zeros", "sweep", "--family", "EX2", "--curve", "ellipse:1", "--params", "4"],
    ["specfun", "compare", "--regime", "ORACLE"],
    ["afe", "psi", "--x", "3", "--sigma", "0"],
    ["afe", "psi", "--x", "3", "--threads", "0"],
    ["nonsense"],
])
def test_usage_errors(argv, capsys):
    assert run(argv, capsys)[0] == EXIT_USAGE


def test_io_errors(capsys, tmp_path):
    assert run(["zeros", "count", "--wave", str(tmp_path / "missing.txt"), "--curve", "horocycle:1"],
               capsys)[0] == EXIT_IO
    assert run(["afe", "psi", "--x", "3", "--out", str(tmp_path / "no" / "dir.csv")], capsys)[0] == EXIT_IO


def test_timestamp_line(capsys):
    _, out, _ = run(["afe", "psi", "--x", "2"], capsys)
    assert out.splitlines()[0].startswith("# generated")
