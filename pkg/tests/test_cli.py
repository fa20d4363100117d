import json

import pytest
from pysat.formula import CNF
from pysat.solvers import Minisat22

from cabsat.cli import main
from cabsat.cnf import parse_dimacs
from cabsat.graphs import gen_cycle, format_edge_list, parse_edge_list


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- generate -----------------------------------------------------------------


def test_generate_round_trips(tmp_path, capsys):
    out = tmp_path / "c6.edges"
    code, _, _ = run(capsys, "generate", "--gen", "cycle:6", "-o", str(out))
    assert code == 0
    assert parse_edge_list(out.read_text()) == gen_cycle(6)


def test_generate_to_stdout(capsys):
    code, stdout, _ = run(capsys, "generate", "--gen", "path:4")
    assert code == 0
    assert stdout.startswith("4 3\n")


# -- encode -------------------------------------------------------------------


def test_encode_header_matches_clause_count(tmp_path, capsys):
    out = tmp_path / "c9.cnf"
    code, _, _ = run(capsys, "encode", "--gen", "cycle:9", "--k", "3", "-o", str(out))
    assert code == 0
    text = out.read_text()
    formula = parse_dimacs(text)
    header = next(line for line in text.splitlines() if line.startswith("p cnf"))
    _, _, nvars, nclauses = header.split()
    assert int(nclauses) == len(formula.clauses)
    assert int(nvars) == formula.num_vars
    assert any(line.startswith("c x 1 1 ") for line in text.splitlines())


def test_encode_map_json(tmp_path, capsys):
    out = tmp_path / "c6.cnf"
    map_out = tmp_path / "map.json"
    code, _, _ = run(
        capsys, "encode", "--gen", "cycle:6", "--k", "2",
        "-o", str(out), "--map-out", str(map_out), "--no-map-comments",
    )
    assert code == 0
    payload = json.loads(map_out.read_text())
    assert payload["n"] == 6 and payload["k"] == 2
    assert not any(l.startswith("c x") for l in out.read_text().splitlines())


@pytest.mark.parametrize("k,expect_sat", [(2, True), (3, False)])
def test_encoded_file_reproduces_solver_status(tmp_path, capsys, k, expect_sat):
    out = tmp_path / "inst.cnf"
    code, _, _ = run(capsys, "encode", "--gen", "cycle:6", "--k", str(k), "-o", str(out))
    assert code == 0
    cnf = CNF(from_file=str(out))
    with Minisat22(bootstrap_with=cnf.clauses) as solver:
        assert solver.solve() is expect_sat


def test_encode_rejects_out_of_range_k(capsys):
    code, _, err = run(capsys, "encode", "--gen", "cycle:6", "--k", "5")
    assert code == 64
    assert "usage error" in err


# -- solve / verify -----------------------------------------------------------


def test_solve_certified_json(tmp_path, capsys):
    out = tmp_path / "result.json"
    code, _, err = run(
        capsys, "solve", "--gen", "cycle:6", "--lb", "1", "--ub", "3", "-o", str(out)
    )
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["k_opt"] == 2 and payload["certified"] is True
    assert payload["instance"] == "cycle:6"
    assert "verify: ok" in err


def test_solve_uncertified_exit_code(tmp_path, capsys):
    out = tmp_path / "result.json"
    code, _, _ = run(
        capsys, "solve", "--gen", "cycle:12", "--lb", "2", "--ub", "3", "-o", str(out)
    )
    assert code == 2
    payload = json.loads(out.read_text())
    assert payload["k_opt"] == 3 and payload["certified"] is False


def test_solve_parallel_flags(tmp_path, capsys):
    out = tmp_path / "result.json"
    code, _, _ = run(
        capsys, "solve", "--gen", "double_star:15,5",
        "--processes", "2", "--order", "bfs", "-o", str(out),
    )
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["k_opt"] == 3 and payload["certified"] is True
    assert payload["processes"] == 2 and payload["order"] == "bfs"


def test_solve_reads_graph_files(tmp_path, capsys):
    graph_path = tmp_path / "c6.edges"
    graph_path.write_text(format_edge_list(gen_cycle(6)))
    out = tmp_path / "result.json"
    code, _, _ = run(capsys, "solve", "--graph", str(graph_path), "-o", str(out))
    assert code == 0
    assert json.loads(out.read_text())["k_opt"] == 2


def test_solve_then_verify_round_trip(tmp_path, capsys):
    out = tmp_path / "result.json"
    run(capsys, "solve", "--gen", "cycle:6", "-o", str(out))
    code, stdout, _ = run(
        capsys, "verify", "--gen", "cycle:6", "--result", str(out), "--oracle"
    )
    assert code == 0
    assert "labeling ok" in stdout and "oracle value 2" in stdout


def test_verify_rejects_tampered_result(tmp_path, capsys):
    out = tmp_path / "result.json"
    run(capsys, "solve", "--gen", "cycle:6", "-o", str(out))
    payload = json.loads(out.read_text())
    payload["labeling"] = list(range(1, 7))  # achieves 1, claims 2
    out.write_text(json.dumps(payload))
    code, _, err = run(capsys, "verify", "--gen", "cycle:6", "--result", str(out))
    assert code == 70
    assert "integrity error" in err


# -- oracle ---------------------------------------------------------------------


def test_oracle_tsv(capsys):
    code, stdout, _ = run(
        capsys, "oracle", "--gen", "cycle:6", "--gen", "path:4", "--witness"
    )
    assert code == 0
    lines = stdout.strip().splitlines()
    assert lines[0] == "instance\tn\tm\tcab\twitness"
    assert lines[1].startswith("cycle:6\t6\t6\t2\t")
    assert lines[2].startswith("path:4\t4\t3\t1\t")


def test_oracle_sweep_ranges(capsys):
    code, stdout, _ = run(capsys, "oracle", "--sweep", "cycle:3..6")
    assert code == 0
    lines = stdout.strip().splitlines()
    assert [line.split("\t")[0] for line in lines[1:]] == [
        "cycle:3", "cycle:4", "cycle:5", "cycle:6",
    ]
    assert lines[4].split("\t")[3] == "2"
    assert run(capsys, "oracle", "--sweep", "cycle:3-6")[0] == 64


def test_oracle_requires_an_input(capsys):
    code, _, err = run(capsys, "oracle")
    assert code == 64


# -- bench-encoding ---------------------------------------------------------------


def test_bench_encoding_nine_by_three(capsys):
    code, stdout, _ = run(capsys, "bench-encoding", "--n", "9", "--w", "3")
    assert code == 0
    rows = {
        (parts[0], parts[1]): parts
        for parts in (line.split("\t") for line in stdout.strip().splitlines()[1:])
    }
    assert rows[("ladder", "emitted")][4:] == ["9", "46"]
    assert rows[("ladder", "analytic")][4:] == ["10", "50"]
    assert rows[("pairwise", "emitted")][4:] == ["0", "18"]
    assert rows[("pairwise", "analytic")][4:] == ["0", "19"]
    assert rows[("seq-per-window", "emitted")][4:] == ["18", "45"]
    assert ("card", "analytic") in rows


# -- error taxonomy ----------------------------------------------------------------


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "solve")[0] == 64  # no input source
    assert run(capsys, "solve", "--gen", "cycle:6", "--graph", "x")[0] == 64
    assert run(capsys, "solve", "--gen", "nosuch:4")[0] == 64
    assert run(capsys, "bench-encoding", "--n", "4", "--w", "9")[0] == 64


def test_data_errors(tmp_path, capsys):
    bad = tmp_path / "bad.edges"
    bad.write_text("3 9\n1 2\n")
    assert run(capsys, "solve", "--graph", str(bad))[0] == 65
    assert run(capsys, "solve", "--graph", str(tmp_path / "missing.edges"))[0] == 65
