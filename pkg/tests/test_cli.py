import json

import pytest

from vertex_orbifold.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_nprod(capsys):
    code, out, _ = run(capsys, "nprod", "--algebra", "sl2", "-n", "1", "x", "y")
    assert code == 0 and out.strip() == "k"


def test_ope_lists_poles(capsys):
    code, out, _ = run(capsys, "ope", "--algebra", "sl2", "h", "x")
    assert code == 0 and out.splitlines() == ["0: 2*:x:"]
    code, out, _ = run(capsys, "ope", "--algebra", "heisenberg:2", "a1", "a2")
    assert out.strip() == "regular"


def test_wick_json(capsys):
    code, out, _ = run(capsys, "--format", "json", "wick", "--algebra", "heisenberg:1", "a1", "a1")
    assert code == 0 and json.loads(out) == {"result": ":a1 a1:"}


def test_decouple_writes_record(capsys, tmp_path):
    path = tmp_path / "w04.json"
    code, out, _ = run(
        capsys,
        "decouple",
        "--algebra",
        "heisenberg:1",
        "--target",
        ":d^4 a1 a1:",
        "--gens",
        ":a1 a1:; :d^2 a1 a1:",
        "--out",
        str(path),
    )
    assert code == 0 and out.startswith("target:")
    record = json.loads(path.read_text())
    assert record["success"] is True
    assert set(record["generators"]) == {"g1", "g2"}


def test_decouple_failure_exits_one(capsys):
    code, out, _ = run(capsys, "decouple", "--algebra", "heisenberg:1", "--target", ":d^2 a1 a1:", "--gens", ":a1 a1:")
    assert code == 1 and "residual" in out


def test_primary(capsys):
    code, out, _ = run(capsys, "primary", "--algebra", "heisenberg:3", "--field", ":d^1 a2 a1:")
    assert code == 0
    assert out.splitlines()[-1].startswith("primary:")


def test_span_builtin(capsys):
    code, out, _ = run(capsys, "span", "--gens", "builtin:h1", "--cutoff", "6")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 6 and all(" full " in line for line in lines)


def test_span_deficient(capsys):
    code, out, _ = run(capsys, "span", "--algebra", "heisenberg:1", "--gens", ":a1 a1:", "--cutoff", "4")
    assert code == 1 and "missing" in out


def test_limit(capsys):
    code, out, _ = run(capsys, "limit", "--algebra", "sl2")
    assert code == 0 and "matches Gram form: yes" in out
    code, out, _ = run(capsys, "limit", "--algebra", "heisenberg:1")
    assert code == 1


def test_verify_dn_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "heisenberg-n1-dn", "--cutoff", "4")
    assert code == 0
    assert "PASS :w00 w11: - :w01 w01: = -5/4 w04 + 7/4 d^2 w02 - 7/24 d^4 w00" in out


def test_poles_reports_computed_set(capsys, sl2_report):
    # the structure constants are cached by the session fixture, so only the CLI layer is timed here
    import vertex_orbifold.cli as cli

    original = cli.structure_constants
    cli.structure_constants = lambda gs: sl2_report
    try:
        code, out, _ = run(capsys, "poles", "--algebra", "sl2")
    finally:
        cli.structure_constants = original
    assert "poles: {-32/3, -8/3, 0, 16/51, 16/9, 16}" in out
    assert "MISMATCH" in out and code == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--suite", "nope"],
        ["nprod", "--algebra", "heisenberg:0", "-n", "1", "a1", "a1"],
        ["nprod", "--algebra", "sl2", "-n", "1", "x", "z"],
        ["wick", "--algebra", "sl2", "x", "x +"],
        ["span", "--gens", "builtin:zz", "--cutoff", "3"],
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_output_is_deterministic(capsys):
    argv = ["--format", "json", "span", "--gens", "builtin:h2", "--cutoff", "5"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
