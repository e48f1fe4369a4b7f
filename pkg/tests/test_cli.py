import csv
import io
import json

import numpy as np
import pytest

from grassdim import terracini
from grassdim.cli import CSV_COLUMNS, main, read_point_file, write_point_file
from grassdim.fields import rationals
from grassdim.terracini import DimensionReport, SecantParams, pluecker_sum, sample_point


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dim_json_roundtrip_and_determinism(capsys):
    code, out, _ = run(capsys, "dim", "7", "3", "2", "0", "--format", "json", "--seed", "3")
    assert code == 0
    rep = DimensionReport.from_dict(json.loads(out))
    assert rep.cone_dim == 26 and rep.params == SecantParams(7, 3, 2, 0)
    assert json.dumps(rep.to_dict(), sort_keys=True, indent=2) + "\n" == out
    _, again, _ = run(capsys, "dim", "7", "3", "2", "0", "--format", "json", "--seed", "3")
    assert again == out


@pytest.mark.parametrize("argv,cone", [(["7", "3", "2", "1"], 20), (["5", "3", "1", "0"], 7),
                                       (["5", "3", "1"], 7)])
def test_dim_values(capsys, argv, cone):
    code, out, _ = run(capsys, "dim", *argv, "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == CSV_COLUMNS
    assert int(rows[0]["cone"]) == cone


def test_dim_fields(capsys):
    code, out, _ = run(capsys, "dim", "7", "3", "2", "1", "--rationals", "--format", "json")
    assert code == 0 and json.loads(out)["primes_used"] == [None]
    code, out, _ = run(capsys, "dim", "7", "3", "2", "1", "--prime", "1000003", "--format", "json")
    assert json.loads(out)["primes_used"] == [1000003] and json.loads(out)["cone_dim"] == 20


def test_dim_text(capsys):
    code, out, _ = run(capsys, "dim", "7", "3", "2", "1")
    assert "cone_dim: 20" in out and "matches_fiber: True" in out


def test_usage_errors(capsys):
    assert run(capsys, "dim", "3", "4", "1", "0")[0] == 2
    assert run(capsys, "dim", "7", "3", "2", "1", "--trials", "1")[0] == 2
    assert run(capsys, "dim", "7", "x", "2")[0] == 2
    assert run(capsys, "nope")[0] == 2
    assert run(capsys, "orbit-count", "--seed-form", "01")[0] == 2
    assert run(capsys, "dim", "7", "3", "2", "--prime", "91")[0] == 2


def test_degenerate_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(terracini, "MAX_RETRIES", 0)
    code, _, err = run(capsys, "dim", "5", "2", "2", "0")
    assert code == 3 and "draws" in err


def test_guard_rail_exit_code(capsys):
    assert run(capsys, "code-gen", "12", "6", "3")[0] == 4
    assert run(capsys, "defect-scan", "--n", "12", "--k", "6", "--s", "2", "--r", "0")[0] == 4


def test_predict(capsys):
    code, out, _ = run(capsys, "predict", "8", "6", "2", "3", "--format", "json")
    d = json.loads(out)
    assert (d["expected_dim"], d["fiber_dim"]) == (25, 21)


@pytest.mark.parametrize("threads", ["1", "2"])
def test_defect_scan(capsys, monkeypatch, threads):
    monkeypatch.setenv("GRASSDIM_THREADS", threads)
    code, out, _ = run(capsys, "defect-scan", "--n", "6:8", "--k", "3", "--s", "2:3", "--r", "0:3")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == CSV_COLUMNS
    keys = [tuple(int(r[c]) for c in "nksr") for r in rows]
    assert keys == sorted(keys) and len(keys) == 3 * 2 * 4
    for r in rows:
        assert r["fiber_match"] == "True"
        if int(r["r"]) >= int(r["k"]) - 1:
            assert int(r["proj"]) == int(r["k"]) * (int(r["n"]) - int(r["k"]))
    row = next(r for r in rows if (r["n"], r["s"], r["r"]) == ("7", "3", "0"))
    assert (row["proj"], row["expected"]) == ("33", "34")


def test_defect_scan_table_cases(capsys):
    code, out, _ = run(capsys, "defect-scan", "--n", "8", "--k", "4", "--s", "3", "--r", "1",
                       "--format", "json")
    (row,) = json.loads(out)["rows"]
    assert (row["proj"], row["expected"]) == (40, 45)


def test_point_file_roundtrip(tmp_path):
    w = pluecker_sum(sample_point(SecantParams(6, 3, 2, 1), rationals(), np.random.default_rng(0)))
    path = tmp_path / "w.txt"
    write_point_file(path, w)
    assert read_point_file(path, rationals()) == w
    path.write_text("2 1\n1 3\n2 4\n")
    assert read_point_file(path, rationals()).tolist()[0] * 2 == 1


def test_recover(capsys, tmp_path):
    path = tmp_path / "p.txt"
    path.write_text("5 3\n1 0 0 0 0 1 0 0 0 0\n")
    code, out, _ = run(capsys, "recover", str(path), "1", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["E"] == [[1, 0, 0, 0, 0]]
    assert d["roundtrip_proportional"] and d["t"]["coords"] == [1, 0, 0, 0, 0, 1]


def test_recover_decomposable(capsys, tmp_path):
    path = tmp_path / "p.txt"
    path.write_text("5 3\n1 0 0 0 0 0 0 0 0 0\n")
    code, out, _ = run(capsys, "recover", str(path), "3", "--format", "json")
    assert code == 0 and json.loads(out)["E"] == [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0]]


def test_recover_generic_secant_fails(capsys, tmp_path):
    w = pluecker_sum(sample_point(SecantParams(7, 3, 2, 0), rationals(), np.random.default_rng(1)))
    path = tmp_path / "g.txt"
    write_point_file(path, w)
    code, _, err = run(capsys, "recover", str(path), "1")
    assert code == 2 and "observed kernel dim 0" in err


def test_recover_bad_file(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("5 3\n1 2\n")
    assert run(capsys, "recover", str(path), "1")[0] == 2
    assert run(capsys, "recover", str(tmp_path / "missing.txt"), "1")[0] == 2


def test_orbit_count(capsys, tmp_path):
    code, out, _ = run(capsys, "orbit-count", "--seed-form", "012", "--format", "json")
    assert json.loads(out)["size"] == 1395
    out_file = tmp_path / "o.bin"
    code, out, _ = run(capsys, "orbit-count", "--seed-form", "012+345", "--format", "json",
                       "--orbit-file", str(out_file))
    assert json.loads(out)["size"] == 357120
    assert out_file.stat().st_size == 4 * 357120


def test_orbit_classify(capsys):
    code, out, _ = run(capsys, "orbit-count", "--classify", "--format", "json")
    d = json.loads(out)
    assert sorted(o["size"] for o in d["orbits"]) == [1395, 54684, 166656, 357120, 468720]
    assert d["total"] == 1048575 and d["complete"]


def test_code_gen(capsys, tmp_path):
    code, out, _ = run(capsys, "code-gen", "6", "3", "2")
    assert "rows: 20" in out and "cols: 1395" in out
    target = tmp_path / "g.csv"
    assert run(capsys, "code-gen", "4", "2", "2", "--format", "csv", "--output", str(target))[0] == 0
    rows = list(csv.reader(target.open()))
    assert len(rows) == 6 and len(rows[0]) == 35


def test_bench(capsys):
    code, out, _ = run(capsys, "bench", "10", "8", "2", "1", "--format", "json")
    d = json.loads(out)
    assert d["cofactor_time"] < 1 and d["naive_skipped"]
    code, out, _ = run(capsys, "bench", "5", "2", "2", "1", "--format", "json")
    d = json.loads(out)
    assert d["naive_rank"] == d["cofactor_rank"] and d["naive_time"] is not None
