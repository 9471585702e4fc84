"""Integration tests for the dskm command line.

These tests drive ``main`` through the generate, build, verify, solve and stats
commands on small files and check exit codes and printed output.
"""
import json

import pytest

from dskm.cli import main
from dskm.cli_instance import EXIT_ERROR, EXIT_FAIL, EXIT_OK
from dskm.utils.stream_io import load_coreset, load_stream, replay

# Small constants plus the full-size shortcut keep the commands fast and exact.
SHORTCUT_SCALE = ["--kappa", "1e-12", "--scale", "shortcut=1"]


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ("DSKM_WORKERS", "DSKM_KAPPA", "DSKM_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def stream_path(tmp_path):
    path = tmp_path / "blobs.stream"
    code = main(
        ["generate", "clustered", "--d", "2", "--L", "4", "--n", "20", "--blobs", "2",
         "--deletions", "0.25", "--seed", "7", "--out", str(path)]
    )
    assert code == EXIT_OK
    return path


@pytest.mark.integration
class TestGenerate:
    """Test the generate command."""

    def test_writes_stream_file(self, capsys, stream_path):
        """Test the generated file parses and the summary names its counts."""
        stream = load_stream(stream_path)

        assert (stream.d, stream.delta_exp) == (2, 4)
        assert (stream.inserts, stream.deletes) == (20, 5)
        assert "(20 +, 5 -)" in capsys.readouterr().out

    def test_stdout(self, capsys):
        """Test without --out the stream goes to stdout."""
        assert main(["generate", "churn", "--d", "1", "--L", "3", "--residual", "3", "--wave-size", "2"]) == EXIT_OK

        assert capsys.readouterr().out.startswith("dskm v1 d=1 L=3\n")


@pytest.mark.integration
class TestBuildVerifySolve:
    """Test the build, verify and solve pipeline."""

    def test_pipeline(self, stream_path, tmp_path, capsys):
        """Test a shortcut build verifies with zero error and solves to k centers."""
        coreset_path = tmp_path / "blobs.coreset"
        capsys.readouterr()

        assert main(["build", "--stream", str(stream_path), "--out", str(coreset_path), "--k", "2", *SHORTCUT_SCALE]) == EXIT_OK
        assert "(shortcut, 25 operations)" in capsys.readouterr().out
        _, _, coreset = load_coreset(coreset_path)
        assert [e.point for e in coreset.entries] == replay(load_stream(stream_path).operations)

        code = main(
            ["verify", "--stream", str(stream_path), "--coreset", str(coreset_path), "--k", "2",
             "--families", "uniform=3,adversarial=3"]
        )
        report = json.loads(capsys.readouterr().out.splitlines()[0])
        assert code == EXIT_OK
        assert report["max_error"] == 0.0
        assert report["passed"] is True
        assert report["evaluated"] == 6

        assert main(["solve", "--coreset", str(coreset_path), "--k", "2"]) == EXIT_OK
        solution = json.loads(capsys.readouterr().out)
        assert len(solution["centers"]) == 2
        assert solution["method"] == "heuristic"

    def test_build_to_stdout(self, stream_path, capsys):
        """Test without --out the coreset file goes to stdout."""
        capsys.readouterr()

        assert main(["build", "--stream", str(stream_path), *SHORTCUT_SCALE]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "dskm v1 d=2 L=4"
        assert len(lines) == 16

    def test_fail_exit_code(self, stream_path, capsys):
        """Test a run whose every guess fails exits 3 with the per-guess causes."""
        capsys.readouterr()

        assert main(["build", "--stream", str(stream_path), "--kappa", "1e-12"]) == EXIT_FAIL
        err = capsys.readouterr().err
        assert err.startswith("FAIL (no-viable-guess)")
        assert "u=16:" in err


@pytest.mark.integration
class TestStats:
    """Test the stats command."""

    def test_rows(self, stream_path, capsys):
        """Test JSON rows for the shortcut, the shared pool and every guess."""
        capsys.readouterr()

        assert main(["stats", "--stream", str(stream_path), *SHORTCUT_SCALE]) == EXIT_OK
        out = capsys.readouterr().out
        rows = [json.loads(line) for line in out.split("\n\n")[0].splitlines()]
        assert rows[0]["component"] == "shortcut"
        assert rows[0]["selected"] is True
        assert rows[1]["component"] == "shared"
        assert rows[1]["selected"] is False
        assert [row["component"] for row in rows[2:]] == [f"guess u={u}" for u in range(1, 17)]
        assert "component" in out.split("\n\n")[1]


@pytest.mark.integration
class TestErrors:
    """Test error reporting and exit codes."""

    def test_bad_epsilon(self, stream_path, capsys):
        """Test an invalid option exits 1 with a message."""
        assert main(["build", "--stream", str(stream_path), "--epsilon", "0.7"]) == EXIT_ERROR
        assert "dskm build: error:" in capsys.readouterr().err

    def test_missing_file(self, tmp_path, capsys):
        """Test a missing stream file exits 1."""
        assert main(["build", "--stream", str(tmp_path / "absent.stream")]) == EXIT_ERROR
        assert "error" in capsys.readouterr().err

    def test_malformed_stream(self, tmp_path, capsys):
        """Test a malformed stream reports its line number."""
        path = tmp_path / "bad.stream"
        path.write_text("dskm v1 d=2 L=3\n+ 1 1\n- 4 4\n")

        assert main(["verify", "--stream", str(path), "--coreset", str(path)]) == EXIT_ERROR
        assert "line 3" in capsys.readouterr().err

    def test_dimension_mismatch(self, stream_path, tmp_path, capsys):
        """Test verifying a coreset of another dimension exits 1."""
        coreset_path = tmp_path / "line.coreset"
        coreset_path.write_text("dskm v1 d=1 L=4\n1.0 3\n")

        assert main(["verify", "--stream", str(stream_path), "--coreset", str(coreset_path)]) == EXIT_ERROR

    def test_empty_coreset_solve(self, tmp_path):
        """Test solving an empty coreset exits 1."""
        path = tmp_path / "empty.coreset"
        path.write_text("dskm v1 d=2 L=3\n")

        assert main(["solve", "--coreset", str(path)]) == EXIT_ERROR

    def test_version(self, capsys):
        """Test --version prints the package version."""
        with pytest.raises(SystemExit) as excinfo:
            main(["--version"])

        assert excinfo.value.code == 0
        assert "dskm 0.1.0" in capsys.readouterr().out
