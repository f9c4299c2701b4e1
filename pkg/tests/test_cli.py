"""Command line behaviour: exit codes, JSON output, dumps, batch summary."""

import io
import json
import subprocess
import sys

import pytest

from planecolor.cli import EXIT_FALSIFIED, EXIT_INPUT, EXIT_OK, run
from planecolor.generators import named


def run_lines(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    rows = [json.loads(line) for line in out.splitlines() if line.strip()]
    return code, rows


@pytest.fixture
def cube_file(tmp_path):
    path = tmp_path / "cube.rot"
    path.write_text(named("cube").to_rotation_text())
    return str(path)


class TestValidate:
    def test_reports_shape(self, capsys, cube_file):
        code, rows = run_lines(capsys, ["validate", "--in", cube_file])
        assert code == EXIT_OK
        assert rows[0]["n"] == 8
        assert rows[0]["m"] == 12
        assert rows[0]["faces"] == 6
        assert rows[0]["plane"] is True

    def test_reads_stdin(self, capsys, monkeypatch):
        monkeypatch.setattr(
            sys, "stdin", io.StringIO(named("k4").to_rotation_text())
        )
        code, rows = run_lines(capsys, ["validate", "--in", "-"])
        assert code == EXIT_OK
        assert rows[0]["n"] == 4

    def test_good_coloring_passes(self, capsys, tmp_path, cube_file):
        colors = tmp_path / "colors.json"
        # cube d2-pairs split into 4 antipodal classes
        colors.write_text(json.dumps({
            "palette": 16,
            "colors": {"0": 1, "6": 1, "1": 2, "7": 2,
                       "2": 3, "4": 3, "3": 4, "5": 4},
        }))
        code, rows = run_lines(
            capsys, ["validate", "--in", cube_file, "--colors", str(colors)]
        )
        assert code == EXIT_OK
        assert rows[0]["coloring"]["valid"] is True

    def test_bad_coloring_dumps_and_exits_3(self, capsys, tmp_path, cube_file):
        colors = tmp_path / "colors.json"
        colors.write_text(json.dumps({
            "palette": 16,
            "colors": {"0": 1, "1": 1},
        }))
        dump = tmp_path / "dumps"
        code, rows = run_lines(
            capsys,
            ["validate", "--in", cube_file, "--colors", str(colors),
             "--dump", str(dump)],
        )
        assert code == EXIT_FALSIFIED
        assert rows[0]["coloring"]["valid"] is False
        assert list(dump.glob("*.rot"))

    def test_garbage_input_exits_2(self, capsys, tmp_path):
        bad = tmp_path / "bad.rot"
        bad.write_text("not a graph\n")
        code, _ = run_lines(capsys, ["validate", "--in", str(bad)])
        assert code == EXIT_INPUT

    def test_missing_file_exits_2(self, capsys, tmp_path):
        code, _ = run_lines(
            capsys, ["validate", "--in", str(tmp_path / "nope.rot")]
        )
        assert code == EXIT_INPUT


class TestColor:
    def test_colors_named_graph(self, capsys, cube_file):
        code, rows = run_lines(capsys, ["color", "--in", cube_file])
        assert code == EXIT_OK
        assert rows[0]["valid"] is True
        assert rows[0]["palette"] == 16
        assert 1 <= rows[0]["colors_used"] <= 16

    def test_trace_flag(self, capsys, tmp_path):
        path = tmp_path / "g.rot"
        path.write_text(named("icosahedron").to_rotation_text())
        code, rows = run_lines(
            capsys, ["color", "--in", str(path), "--trace"]
        )
        assert code == EXIT_OK
        assert rows[0]["steps"] == len(rows[0]["trace"])


class TestChi2:
    def test_c5(self, capsys, tmp_path):
        path = tmp_path / "c5.rot"
        path.write_text(named("c5").to_rotation_text())
        code, rows = run_lines(capsys, ["chi2", "--in", str(path)])
        assert code == EXIT_OK
        assert rows[0]["chi2"] == 5

    def test_budget_can_force_unknown(self, capsys, tmp_path):
        path = tmp_path / "g.rot"
        path.write_text(named("dodecahedron").to_rotation_text())
        code, rows = run_lines(
            capsys, ["chi2", "--in", str(path), "--budget", "1"]
        )
        assert code == EXIT_OK
        assert rows[0]["chi2"] == "unknown"


class TestDetect:
    def test_k4(self, capsys, tmp_path):
        path = tmp_path / "k4.rot"
        path.write_text(named("k4").to_rotation_text())
        code, rows = run_lines(capsys, ["detect", "--in", str(path)])
        assert code == EXIT_OK
        assert rows[0]["configuration"]["rule"] == "R-3in3f"

    def test_k1_has_no_configuration(self, capsys, tmp_path):
        path = tmp_path / "k1.rot"
        path.write_text(named("k1").to_rotation_text())
        code, rows = run_lines(capsys, ["detect", "--in", str(path)])
        assert code == EXIT_OK
        assert rows[0]["configuration"] is None


class TestDischarge:
    def test_cube_audit(self, capsys, cube_file):
        code, rows = run_lines(capsys, ["discharge", "--in", cube_file])
        assert code == EXIT_OK
        assert rows[0]["conservation"] == "-8"
        assert rows[0]["falsification"] is False

    def test_transfer_list(self, capsys, tmp_path):
        path = tmp_path / "ico.rot"
        path.write_text(named("icosahedron").to_rotation_text())
        code, rows = run_lines(
            capsys, ["discharge", "--in", str(path), "--transfers"]
        )
        assert code == EXIT_OK
        assert len(rows[0]["transfer_list"]) == 60


class TestGen:
    def test_named_to_file(self, capsys, tmp_path):
        out = tmp_path / "c6.rot"
        code = run(["gen", "--name", "c6", "--out", str(out)])
        assert code == EXIT_OK
        assert out.read_text() == named("c6").to_rotation_text()

    def test_random_roundtrip_through_color(self, capsys, tmp_path):
        out = tmp_path / "r.rot"
        assert run(["gen", "--n", "60", "--seed", "5", "--out", str(out)]) == EXIT_OK
        capsys.readouterr()
        code, rows = run_lines(capsys, ["color", "--in", str(out)])
        assert code == EXIT_OK
        assert rows[0]["valid"] is True

    def test_gen_is_deterministic(self, capsys):
        run(["gen", "--n", "30", "--seed", "9"])
        first = capsys.readouterr().out
        run(["gen", "--n", "30", "--seed", "9"])
        assert capsys.readouterr().out == first


class TestBatch:
    def test_summary_line(self, capsys):
        code, rows = run_lines(
            capsys, ["batch", "--count", "3", "--n", "40", "--seed", "11"]
        )
        assert code == EXIT_OK
        body, summary = rows[:-1], rows[-1]
        assert summary["summary"] is True
        assert summary["graphs"] == 3
        assert summary["failures"] == 0
        assert summary["max_colors_used"] <= 16
        assert len(body) == 3
        assert all(row["ok"] for row in body)

    def test_corpus_included(self, capsys):
        code, rows = run_lines(
            capsys, ["batch", "--count", "0", "--corpus"]
        )
        assert code == EXIT_OK
        assert rows[-1]["graphs"] == 15


class TestTextFormat:
    def test_key_value_lines(self, capsys, cube_file):
        code = run(["validate", "--in", cube_file, "--format", "text"])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert "n=8" in out
        assert "m=12" in out


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "planecolor.cli", "gen", "--name", "k4"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == named("k4").to_rotation_text()
