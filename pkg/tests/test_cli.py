import json
import re

import pytest

from plycover import read_instance, read_solution
from plycover.cli import main, run_compare_one


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def chain_instance(tmp_path):
    """Three-square chain with one point per square, solver ply 2."""
    doc = {
        "format": "plycover-instance/1",
        "name": "chain",
        "mode": "line",
        "line_y": 0.0,
        "points": [[0.5, -0.3], [1.2, -0.4], [2.0, -0.3]],
        "squares": [[0.0, 0.5], [0.8, 0.4], [1.6, 0.5]],
    }
    path = tmp_path / "chain.json"
    path.write_text(json.dumps(doc))
    return path


class TestGen:
    def test_writes_valid_instance(self, tmp_path, capsys):
        out = tmp_path / "a.inst"
        code, _, _ = run(
            ["gen", "--mode", "line", "--n", "5", "--m", "5", "--seed", "42",
             "--out", str(out)],
            capsys,
        )
        assert code == 0
        inst = read_instance(out)
        assert inst.n == 5 and inst.m == 5

    def test_negative_n_is_usage_error(self, tmp_path, capsys):
        with pytest.raises(SystemExit) as err:
            main(["gen", "--mode", "line", "--n", "-1", "--m", "3",
                  "--out", str(tmp_path / "x")])
        assert err.value.code == 2

    def test_same_flags_identical_files(self, tmp_path, capsys):
        a, b = tmp_path / "a.inst", tmp_path / "b.inst"
        for out in (a, b):
            run(["gen", "--mode", "slab", "--n", "4", "--m", "4", "--seed", "7",
                 "--out", str(out)], capsys)
        assert a.read_bytes() == b.read_bytes()

    def test_generation_failure_exit_code(self, tmp_path, capsys):
        code, _, err = run(
            ["gen", "--mode", "line", "--n", "1", "--m", "1", "--jitter", "0.499",
             "--out", str(tmp_path / "x")],
            capsys,
        )
        assert code == 3


class TestSolve:
    def test_chain_summary_and_solution(self, chain_instance, tmp_path, capsys):
        sol_path = tmp_path / "chain.sol"
        code, out, _ = run(
            ["solve", "--mode", "line1", "--in", str(chain_instance),
             "--out", str(sol_path), "--no-log"],
            capsys,
        )
        assert code == 0
        assert out.startswith("ply=2 squares=3 time=")
        sol = read_solution(sol_path)
        assert sol.square_ids == (0, 1, 2)
        assert sol.ply == 2
        assert sol.witness["depth"] == 2

    def test_empty_instance_solves_to_zero(self, tmp_path, capsys):
        inst = tmp_path / "empty.inst"
        run(["gen", "--mode", "line", "--n", "0", "--m", "2", "--seed", "1",
             "--out", str(inst)], capsys)
        code, out, _ = run(
            ["solve", "--mode", "line1", "--in", str(inst), "--no-log"], capsys
        )
        assert code == 0
        assert out.startswith("ply=0 squares=0")

    def test_mode_mismatch_is_input_error(self, tmp_path, capsys):
        inst = tmp_path / "slab.inst"
        run(["gen", "--mode", "slab", "--n", "3", "--m", "3", "--seed", "2",
             "--out", str(inst)], capsys)
        code, _, err = run(
            ["solve", "--mode", "line1", "--in", str(inst), "--no-log"], capsys
        )
        assert code == 4
        assert "line1" in err

    def test_missing_file_is_input_error(self, tmp_path, capsys):
        code, _, _ = run(
            ["solve", "--mode", "line1", "--in", str(tmp_path / "nope"), "--no-log"],
            capsys,
        )
        assert code == 4

    def test_run_record_appended(self, chain_instance, tmp_path, capsys):
        log = tmp_path / "runs.jsonl"
        run(["solve", "--mode", "line1", "--in", str(chain_instance),
             "--out", str(tmp_path / "s"), "--log", str(log)], capsys)
        run(["solve", "--mode", "line2", "--in", str(chain_instance),
             "--out", str(tmp_path / "s2"), "--log", str(log)], capsys)
        records = [json.loads(line) for line in log.read_text().splitlines()]
        assert len(records) == 2
        assert records[0]["ply"] == 2
        assert records[0]["version"]


class TestCompare:
    def test_small_line_sweep_passes(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        code, out, _ = run(
            ["compare", "--mode", "line1", "--count", "15", "--seed", "1",
             "--no-log"],
            capsys,
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("instance\tmode")
        assert lines[-1].startswith("# checked=15 failures=0 max_ratio=1.0")

    def test_explicit_instance_file(self, chain_instance, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        code, out, _ = run(
            ["compare", "--mode", "line1", "--in", str(chain_instance), "--no-log"],
            capsys,
        )
        assert code == 0
        assert "chain\tline1\t3\t3\t2\t2\t1.000" in out

    def test_bad_solver_fails_with_fixture(self, chain_instance, tmp_path, capsys,
                                           monkeypatch):
        # a lawful but wasteful solver: pick every square
        def greedy_everything(inst, mode):
            from plycover import global_ply

            ids = frozenset(s.id for s in inst.squares)
            ply, witness = global_ply(ids, inst.squares)
            return ids, ply, witness, ()

        import plycover.cli as cli_mod

        monkeypatch.chdir(tmp_path)
        monkeypatch.setattr(cli_mod, "_solve_instance", greedy_everything)
        doc = {
            "format": "plycover-instance/1",
            "name": "twin",
            "mode": "line",
            "line_y": 0.0,
            "points": [[0.5, -0.2]],
            "squares": [[0.0, 0.5], [0.1, 0.6]],
        }
        path = tmp_path / "twin.json"
        path.write_text(json.dumps(doc))
        code, out, err = run(
            ["compare", "--mode", "line1", "--in", str(path),
             "--fixtures-dir", str(tmp_path / "fx"), "--no-log"],
            capsys,
        )
        assert code == 5
        assert "failures=1" in out
        fixtures = list((tmp_path / "fx").glob("fail-line1-*.json"))
        assert len(fixtures) == 1
        assert read_instance(fixtures[0]).name == "twin"

    def test_report_dir_writes_tsv_and_figures(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        report = tmp_path / "out"
        code, _, _ = run(
            ["compare", "--mode", "slab", "--count", "6", "--seed", "2",
             "--report-dir", str(report), "--no-log"],
            capsys,
        )
        assert code == 0
        assert (report / "report.tsv").exists()
        assert (report / "ratios.svg").exists()

    def test_run_compare_one_slab_checks(self):
        from plycover import GenParams, gen_slab_instance

        inst = gen_slab_instance(GenParams(n=5, m=5), seed=12)
        report = run_compare_one(inst, "slab")
        assert report.passed
        assert report.checks["structure"] is True
        assert report.checks["k9"] is True

    def test_line2_mode(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        code, out, _ = run(
            ["compare", "--mode", "line2", "--count", "8", "--seed", "4", "--no-log"],
            capsys,
        )
        assert code == 0
        assert "failures=0" in out

    def test_full_mode(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        code, out, _ = run(
            ["compare", "--mode", "full", "--count", "8", "--seed", "4",
             "--y-span", "1.2", "--no-log"],
            capsys,
        )
        assert code == 0
        assert "failures=0" in out

    def test_per_instance_run_records(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        log = tmp_path / "log.jsonl"
        run(["compare", "--mode", "line1", "--count", "3", "--seed", "1",
             "--log", str(log)], capsys)
        records = [json.loads(line) for line in log.read_text().splitlines()]
        per_instance = [r for r in records if r["cmd"] == "compare"]
        assert len(per_instance) == 3
        assert all("oracle_ply" in r and "passed" in r for r in per_instance)
        assert records[-1]["cmd"] == "compare-summary"


class TestRender:
    def test_counts_and_determinism(self, chain_instance, tmp_path, capsys):
        sol = tmp_path / "chain.sol"
        run(["solve", "--mode", "line1", "--in", str(chain_instance),
             "--out", str(sol), "--no-log"], capsys)
        out1, out2 = tmp_path / "a.svg", tmp_path / "b.svg"
        assert run(["render", "--in", str(chain_instance), "--solution", str(sol),
                    "--out", str(out1)], capsys)[0] == 0
        assert run(["render", "--in", str(chain_instance), "--solution", str(sol),
                    "--out", str(out2)], capsys)[0] == 0
        data = out1.read_text()
        assert len(re.findall(r'id="square-', data)) == 3
        assert len(re.findall(r'id="point-', data)) == 3
        assert len(re.findall(r'id="region-0"', data)) == 1
        assert len(re.findall(r'id="stab-line"', data)) == 1
        assert out1.read_bytes() == out2.read_bytes()

    def test_instance_only_has_no_region(self, chain_instance, tmp_path, capsys):
        out = tmp_path / "plain.svg"
        run(["render", "--in", str(chain_instance), "--out", str(out)], capsys)
        assert 'id="region-0"' not in out.read_text()

    def test_unreadable_input(self, tmp_path, capsys):
        code, _, _ = run(
            ["render", "--in", str(tmp_path / "missing"), "--out",
             str(tmp_path / "x.svg")],
            capsys,
        )
        assert code == 4


class TestBench:
    def test_single_size_single_row(self, capsys):
        code, out, _ = run(
            ["bench", "--n-list", "12", "--m-list", "10", "--reps", "1"], capsys
        )
        assert code == 0
        lines = [l for l in out.splitlines() if l and not l.startswith("#")]
        assert lines[0] == "n\tm\treps\tmedian_ms"
        assert len(lines) == 2
        assert lines[1].startswith("12\t10\t1\t")
