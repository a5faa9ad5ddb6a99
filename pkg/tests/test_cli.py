import json

import pytest

from qclaw.cli import main
from qclaw.schemas import VerificationReport
from qclaw.seedfile import load_bundled, load_seed_file


def write_seed(tmp_path, **fields):
    data = {"m": 2, "n_ex": 1, "lambda": [[0, -1], [1, 0]], "b_tilde": [[0], [1]]}
    data.update(fields)
    path = tmp_path / "seed.json"
    path.write_text(json.dumps(data))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate(tmp_path, capsys):
    code, out, _ = run(capsys, "validate", write_seed(tmp_path))
    assert code == 0
    assert out.strip() == "d=(1)"


def test_validate_json(tmp_path, capsys):
    code, out, _ = run(capsys, "validate", write_seed(tmp_path, description="rank one"), "--json")
    assert code == 0
    assert json.loads(out) == {"m": 2, "n_ex": 1, "d": [1], "description": "rank one"}


def test_validate_rejects_non_skew_lambda(tmp_path, capsys):
    code, _, err = run(capsys, "validate", write_seed(tmp_path, **{"lambda": [[0, 1], [1, 0]]}))
    assert code == 2
    assert "row 1, column 2" in err


def test_malformed_seed_file_is_located(tmp_path, capsys):
    code, _, err = run(capsys, "validate", write_seed(tmp_path, b_tilde=[[0], ["x"]]))
    assert code == 2
    assert "b_tilde" in err and "row 2" in err


def test_missing_file(capsys):
    code, _, _ = run(capsys, "validate", "/nonexistent/seed.json")
    assert code == 2


def test_non_utf8_seed_file(tmp_path, capsys):
    path = tmp_path / "seed.json"
    path.write_bytes(b"\xff\xfe")
    code, _, err = run(capsys, "validate", str(path))
    assert code == 2
    assert "UTF-8" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["graph", "--max-depth", "-1"],
        ["verify", "--check", "specialization", "--depth", "-1"],
        ["verify", "--check", "laurent", "--depth", "-1"],
    ],
)
def test_negative_depth(tmp_path, capsys, argv):
    code, _, err = run(capsys, argv[0], write_seed(tmp_path), *argv[1:])
    assert code == 2
    assert "nonnegative" in err


def test_unknown_flag(tmp_path):
    with pytest.raises(SystemExit) as err:
        main(["validate", write_seed(tmp_path), "--bogus"])
    assert err.value.code == 2


def test_mutate_classical(tmp_path, capsys):
    code, out, _ = run(capsys, "mutate", write_seed(tmp_path), "--seq", "1", "--classical")
    assert code == 0
    assert "x1' = x1^-1*x2 + x1^-1" in out.splitlines()


def test_mutate_quantum(tmp_path, capsys):
    code, out, _ = run(capsys, "mutate", write_seed(tmp_path), "--seq", "1")
    assert code == 0
    assert "x1' = 1 * M[-1,0] + 1 * M[-1,1]" in out.splitlines()


def test_mutate_round_trip(tmp_path, capsys):
    seed = write_seed(tmp_path)
    _, initial, _ = run(capsys, "mutate", seed)
    _, twice, _ = run(capsys, "mutate", seed, "--seq", "1,1")
    assert twice == initial
    assert initial.splitlines() == ["x1 = 1 * M[1,0]", "x2 = 1 * M[0,1]"]


def test_mutate_with_names(tmp_path, capsys):
    seed = write_seed(tmp_path, names=["a", "b"])
    _, out, _ = run(capsys, "mutate", seed, "--seq", "1", "--classical", "--json")
    data = json.loads(out)
    assert data["variables"][0] == {"index": 1, "label": "a'", "value": "a^-1*b + a^-1"}
    assert data["b_tilde"] == [[0], [-1]]


def test_mutate_bad_index(tmp_path, capsys):
    code, _, _ = run(capsys, "mutate", write_seed(tmp_path), "--seq", "2")
    assert code == 2


def test_specialize(tmp_path, capsys):
    code, out, _ = run(capsys, "specialize", write_seed(tmp_path), "--seq", "1")
    assert code == 0
    assert "x1' = x1^-1*x2 + x1^-1" in out.splitlines()


def test_grading(tmp_path, capsys):
    code, out, _ = run(capsys, "grading", write_seed(tmp_path, grading=[1, 0]), "--json")
    assert code == 0
    assert json.loads(out) == {"basis": [[1, 0]], "rank": 1, "grading": [1, 0], "grading_in_lattice": True}


def test_graph(tmp_path, capsys):
    code, out, _ = run(capsys, "graph", write_seed(tmp_path), "--max-depth", "4", "--json")
    assert code == 0
    data = json.loads(out)
    assert (data["clusters"], data["variables"], data["complete"]) == (2, 2, True)


@pytest.mark.parametrize(
    "check, extra",
    [
        ("laurent", ["--depth", "3"]),
        ("powerids", ["--l-max", "3"]),
        ("propkey", ["--samples", "5"]),
        ("specialization", ["--depth", "3"]),
        ("homogeneity", ["--depth", "3"]),
        ("graded", ["--depth", "2", "--g-min", "-2", "--g-max", "2"]),
        ("mutation", ["--samples", "10"]),
        ("domain", ["--samples", "20"]),
    ],
)
def test_verify_reports_parse(tmp_path, capsys, check, extra):
    seed = write_seed(tmp_path, grading=[1, 0])
    code, out, _ = run(capsys, "verify", seed, "--check", check, *extra)
    report = VerificationReport.model_validate_json(out)
    assert code == 0
    assert report.check_name == check
    assert report.status == "pass"


def test_verify_is_byte_identical(tmp_path, capsys):
    seed = write_seed(tmp_path)
    _, first, _ = run(capsys, "verify", seed, "--check", "propkey", "--samples", "5", "--rng-seed", "9")
    _, second, _ = run(capsys, "verify", seed, "--check", "propkey", "--samples", "5", "--rng-seed", "9")
    assert first == second


def test_verify_graded_needs_grading(tmp_path, capsys):
    code, _, err = run(capsys, "verify", write_seed(tmp_path), "--check", "graded")
    assert code == 2
    assert "--grading" in err


def test_verify_rejects_non_grading(tmp_path, capsys):
    code, _, _ = run(capsys, "verify", write_seed(tmp_path), "--check", "graded", "--grading", "0,1")
    assert code == 2


def test_bundled_seed_files_load():
    seed_file, pair = load_bundled("a3_principal")
    assert (pair.m, pair.n_ex, pair.d) == (6, 3, (1, 1, 1))
    assert seed_file.description


def test_load_seed_file_checks_sizes(tmp_path):
    from qclaw.errors import DimensionMismatch

    with pytest.raises(DimensionMismatch):
        load_seed_file(write_seed(tmp_path, m=3))
