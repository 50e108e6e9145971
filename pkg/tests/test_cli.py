import json
import subprocess
import sys
from pathlib import Path

import pytest

from pqvw.cli import parse_args, run

PKG_ROOT = Path(__file__).resolve().parents[1] / "src"


def invoke(*args: str, timeout: int = 300) -> subprocess.CompletedProcess:
    env = {"PYTHONPATH": str(PKG_ROOT), "PATH": "/usr/bin:/bin"}
    return subprocess.run(
        [sys.executable, "-m", "pqvw", *args],
        capture_output=True,
        text=True,
        timeout=timeout,
        env=env,
    )


class TestParsing:
    def test_bracket_config(self):
        cfg = parse_args(["bracket", "--n", "3", "--indices", "0,1,2"])
        assert cfg.command == "bracket"
        assert cfg.indices == (0, 1, 2)

    def test_sweep_config(self):
        cfg = parse_args(
            ["verify", "sh-jacobi", "--n", "3", "--window", "2", "--format", "json"]
        )
        assert cfg.command == "verify sh-jacobi"
        assert (cfg.n, cfg.window, cfg.fmt) == (3, 2, "json")

    def test_negative_indices_accepted(self):
        cfg = parse_args(["bracket", "--n", "3", "--indices", "-2,0,2"])
        assert cfg.indices == (-2, 0, 2)

    def test_wrong_index_count_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            parse_args(["verify", "sh-jacobi", "--n", "3", "--indices", "0,1"])
        assert exc.value.code == 2

    def test_fi_requires_picks_or_counterexample(self):
        with pytest.raises(SystemExit) as exc:
            parse_args(["verify", "fi", "--n", "3"])
        assert exc.value.code == 2

    def test_arity_guards_exit_2(self):
        for argv in (
            ["oracle-check", "--n", "2"],
            ["subalgebra", "search", "--n", "2", "--window", "2"],
            ["subalgebra", "canonical", "--n", "2"],
        ):
            with pytest.raises(SystemExit) as exc:
                parse_args(argv)
            assert exc.value.code == 2


class TestRun:
    def test_bracket_payload(self):
        report, code = run(parse_args(["bracket", "--n", "3", "--indices", "0,1,2"]))
        assert code == 0
        (result,) = report.results
        assert result["coefficient"] == "1*p^0*q^-2 + -1*p^2*q^0"
        assert result["index"] == 3
        assert result["q_limit"] == "1*q^-2 + -1*q^2"
        assert result["classical"] == "0"

    def test_fi_counterexample_passes(self):
        report, code = run(parse_args(["verify", "fi", "--n", "4", "--counterexample"]))
        assert code == 0
        (result,) = report.results
        assert result["input"]["expected"] == "nonzero"
        assert result["residual"] != "0"

    def test_fi_failing_pick_exits_1(self):
        report, code = run(
            parse_args(["verify", "fi", "--n", "3", "--y", "-2,-1", "--x", "-2,0,1"])
        )
        assert code == 1
        assert report.results[0]["verdict"] == "fail"

    def test_wall_time_not_in_json(self):
        report, _ = run(parse_args(["bracket", "--n", "2", "--indices", "0,1"]))
        payload = json.dumps(report.to_json())
        assert report.wall_time >= 0.0
        assert "wall_time" not in payload


class TestBlackBox:
    def test_exit_codes(self):
        assert invoke("bracket", "--n", "3", "--indices", "0,1,2").returncode == 0
        assert (
            invoke("verify", "fi", "--n", "3", "--y", "-2,-1", "--x", "-2,0,1").returncode
            == 1
        )
        assert invoke("verify", "sh-jacobi", "--n", "3", "--indices", "0,1").returncode == 2

    def test_json_smoke_deterministic_and_seeded(self, tmp_path):
        args = ("verify", "all", "--level", "smoke", "--seed", "42", "--format", "json")
        first = invoke(*args)
        second = invoke(*args)
        assert first.returncode == 0 and second.returncode == 0
        assert first.stdout == second.stdout
        payload = json.loads(first.stdout)
        assert payload["params"]["seed"] == 42
        assert payload["summary"]["fail"] == 0
        assert payload["version"]

    def test_jobs_do_not_change_output(self):
        base = ("verify", "sh-jacobi", "--n", "3", "--window", "1", "--format", "json")
        serial = invoke(*base, "--jobs", "1")
        parallel = invoke(*base, "--jobs", "3")
        assert serial.returncode == parallel.returncode == 0
        assert serial.stdout == parallel.stdout

    def test_output_file_atomic_write(self, tmp_path):
        target = tmp_path / "report.json"
        proc = invoke(
            "subalgebra",
            "search",
            "--n",
            "3",
            "--window",
            "2",
            "--format",
            "json",
            "--output",
            str(target),
        )
        assert proc.returncode == 0
        payload = json.loads(target.read_text())
        assert payload["results"][0]["kind"] == "subalgebra-search-n3"
        found = payload["results"][0]["input"]["found"]
        assert [-1, 0, 1] in found
        assert not list(tmp_path.glob(".pqvw-report-*"))

    def test_oracle_check_command(self):
        proc = invoke("oracle-check", "--n", "3", "--window", "1", "--format", "json")
        assert proc.returncode == 0
        payload = json.loads(proc.stdout)
        kinds = [r["kind"] for r in payload["results"]]
        assert "oscillator-relations" in kinds
        assert "closed-vs-recursive-n3" in kinds

    def test_jacobi2_and_limits_commands(self):
        proc = invoke("verify", "jacobi2", "--window", "1", "--format", "json")
        assert proc.returncode == 0
        kinds = [r["kind"] for r in json.loads(proc.stdout)["results"]]
        assert kinds == ["pq-jacobi2", "q-jacobi2"]
        proc = invoke("verify", "limits", "--window", "2", "--format", "json")
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["summary"]["fail"] == 0

    def test_bracket_arity_two(self):
        proc = invoke("bracket", "--n", "2", "--indices", "3,1", "--format", "json")
        payload = json.loads(proc.stdout)
        (result,) = payload["results"]
        assert result["coefficient"] == "1*p^-2*q^1 + 1*p^-1*q^2"
        assert result["index"] == 4
        assert result["classical"] == "2"
