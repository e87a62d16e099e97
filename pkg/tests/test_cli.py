import json

import numpy as np
import pytest

from eigenid import commands
from eigenid import identity as identity_module
from eigenid.__main__ import main
from eigenid.config import MatrixFile
from eigenid.eigensolver import eigh
from eigenid.instances import haar_unitary
from eigenid.linalg import hermitian_from_entries
from eigenid.modules import file as file_module
from eigenid.report import Report


def run_check(*args: str) -> int:
    return main(["check", *args])


class TestCheck:
    def test_swap_matrix(self, matrix_path, tmp_path, read_json):
        out = tmp_path / "report.json"
        assert run_check("--matrix", matrix_path([[0, 1], [1, 0]]), "--out", str(out)) == 0
        report = read_json(out)
        assert report["spectrum"]["multiplicities"] == [1, 1]
        assert len(report["records"]) == 4
        assert all(record["rel_err"] <= 1e-10 for record in report["records"])
        assert all(abs(cluster["subset_sum"] - 1) <= 1e-8 for cluster in report["summary"]["clusters"])
        assert report["summary"]["passed"] is True
        assert report["input_digest"].startswith("sha256:")

    def test_non_hermitian_exits_3(self, matrix_path):
        assert run_check("--matrix", matrix_path([[0, 1], [0, 0]])) == 3

    def test_explicit_subset(self, matrix_path, tmp_path, read_json):
        out = tmp_path / "report.json"
        code = run_check(
            "--matrix", matrix_path(np.diag([1.0, 1.0, 2.0])), "--subsets", "1,2", "--cluster", "1", "--out", str(out)
        )
        assert code == 0
        records = read_json(out)["records"]
        assert len(records) == 1
        assert records[0]["subset"] == [1, 2]
        assert records[0]["lhs"] == pytest.approx(1.0, abs=1e-12)
        assert records[0]["rhs"] == pytest.approx(1.0, abs=1e-12)

    def test_explicit_subset_selects_matching_clusters(self, matrix_path, tmp_path, read_json):
        out = tmp_path / "report.json"
        assert run_check("--matrix", matrix_path(np.diag([1.0, 1.0, 2.0])), "--subsets", "1,2", "--out", str(out)) == 0
        records = read_json(out)["records"]
        assert [record["cluster_index"] for record in records] == [1]

    def test_subset_matching_no_cluster_exits_2(self, matrix_path):
        assert run_check("--matrix", matrix_path(np.diag([1.0, 1.0, 2.0])), "--subsets", "1,2,3") == 2

    def test_missing_and_malformed_files_exit_2(self, tmp_path):
        assert run_check("--matrix", str(tmp_path / "missing.json")) == 2
        broken = tmp_path / "broken.json"
        broken.write_text("{not json")
        assert run_check("--matrix", str(broken)) == 2

    def test_no_convergence_exits_4(self, matrix_path, tmp_path):
        config = tmp_path / "tolerances.yaml"
        config.write_text("max_sweeps: 1\neig_tol: 1.0e-15\n")
        matrix = hermitian_from_entries(np.arange(25).reshape(5, 5) + np.arange(25).reshape(5, 5).T)
        assert run_check("--matrix", matrix_path(matrix.entries), "--config", str(config)) == 4

    def test_residual_failure_exits_1(self, matrix_path, monkeypatch, tmp_path, read_json):
        run_sweep = commands.run_sweep

        def inflated(*args, **kwargs):
            return [evaluation.model_copy(update={"rel_err": 1e-3}) for evaluation in run_sweep(*args, **kwargs)]

        monkeypatch.setattr(commands, "run_sweep", inflated)
        out = tmp_path / "report.json"
        assert run_check("--matrix", matrix_path([[0, 1], [1, 0]]), "--out", str(out)) == 1
        assert read_json(out)["summary"]["passed"] is False

    def test_sweep_guard(self, matrix_path, tmp_path):
        config = tmp_path / "tolerances.yaml"
        config.write_text("max_subsets: 2\n")
        matrix = matrix_path(np.diag([1.0, 1.0, 2.0]))
        assert run_check("--matrix", matrix, "--config", str(config)) == 2
        assert run_check("--matrix", matrix, "--config", str(config), "--force", "--out", str(tmp_path / "r.json")) == 0

    def test_csv_report(self, matrix_path, tmp_path):
        out = tmp_path / "report.csv"
        assert run_check("--matrix", matrix_path([[0, 1], [1, 0]]), "--out", str(out)) == 0
        lines = out.read_text().splitlines()
        assert lines[0].split(",")[:4] == ["cluster_index", "cluster_value", "multiplicity", "subset"]
        assert len(lines) == 5

    def test_report_round_trips(self, matrix_path, tmp_path):
        out = tmp_path / "report.json"
        assert run_check("--matrix", matrix_path(np.diag([1.0, 1.0, 2.0])), "--out", str(out)) == 0
        report = Report.model_validate_json(out.read_text())
        assert Report.model_validate_json(report.model_dump_json()) == report
        assert report.spectrum.gap_margin is not None
        assert all(len(record.subset) == record.multiplicity for record in report.records)

    def test_record_order_is_independent_of_threads(self, matrix_path, tmp_path, read_json):
        matrix = matrix_path(np.diag([3.0, 1.0, 1.0, 2.0]))
        reports = []
        for threads in ("1", "4"):
            out = tmp_path / f"report-{threads}.json"
            assert run_check("--matrix", matrix, "--threads", threads, "--out", str(out)) == 0
            reports.append(read_json(out)["records"])
        assert reports[0] == reports[1]
        keys = [(record["cluster_index"], record["subset"]) for record in reports[0]]
        assert keys == sorted(keys)

    def test_huge_entries(self, matrix_path, tmp_path, read_json):
        out = tmp_path / "report.json"
        assert run_check("--matrix", matrix_path([[0, 1e200], [1e200, 0]]), "--out", str(out)) == 0
        report = read_json(out)
        assert report["spectrum"]["multiplicities"] == [1, 1]
        np.testing.assert_allclose(report["spectrum"]["values"], [-1e200, 1e200], rtol=1e-14)
        assert all(record["lhs"] == pytest.approx(0.5, abs=1e-12) for record in report["records"])
        assert report["summary"]["max_rel_err"] <= 1e-10

    def test_negative_right_hand_side_exits_1(self, matrix_path, monkeypatch):
        cluster_eigenvalues = identity_module.cluster_eigenvalues

        def nudged(*args, **kwargs):
            spectrum = cluster_eigenvalues(*args, **kwargs)
            first = spectrum.clusters[0].model_copy(update={"value": spectrum.clusters[0].value + 1e-3})
            return spectrum.model_copy(update={"clusters": (first, *spectrum.clusters[1:])})

        monkeypatch.setattr(identity_module, "cluster_eigenvalues", nudged)
        assert run_check("--matrix", matrix_path(np.diag([1.0, 1.0, 2.0])), "--cluster", "1") == 1

    def test_threads_variable_is_validated(self, matrix_path, monkeypatch):
        monkeypatch.setenv("EIGENID_THREADS", "zero")
        matrix = matrix_path([[0, 1], [1, 0]])
        assert run_check("--matrix", matrix) == 2
        assert run_check("--matrix", matrix, "--threads", "2") == 0

    def test_failed_write_leaves_no_temporary_file(self, matrix_path, monkeypatch, tmp_path):
        out_dir = tmp_path / "out"
        out_dir.mkdir()

        def refuse(source, target):
            raise PermissionError(f"cannot replace {target}")

        monkeypatch.setattr(file_module.os, "replace", refuse)
        assert run_check("--matrix", matrix_path([[0, 1], [1, 0]]), "--out", str(out_dir / "report.json")) == 2
        assert list(out_dir.iterdir()) == []

    def test_logs_go_to_stderr(self, matrix_path, capsys):
        assert run_check("--matrix", matrix_path([[2.0]])) == 0
        captured = capsys.readouterr()
        assert "distinct eigenvalue" in captured.err
        assert "distinct eigenvalue" not in captured.out

    def test_stdout_report(self, matrix_path, capsys):
        assert run_check("--matrix", matrix_path([[2.0]])) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["spectrum"]["gap_margin"] is None
        assert report["records"][0]["lhs"] == 1.0


class TestGen:
    def test_gen_round_trip(self, tmp_path):
        out = tmp_path / "A.json"
        assert main(["gen", "--spectrum", "1:2,2:1", "--seed", "7", "--out", str(out)]) == 0
        matrix_file = MatrixFile.parse(out.read_text())
        assert matrix_file.n == 3
        values = eigh(hermitian_from_entries(matrix_file.to_array())).values
        np.testing.assert_allclose(values, [1.0, 1.0, 2.0], atol=1e-10)

    def test_gen_zero_matrix(self, tmp_path):
        out = tmp_path / "A.json"
        assert main(["gen", "--spectrum", "0:3", "--out", str(out)]) == 0
        array = MatrixFile.parse(out.read_text()).to_array()
        assert array.shape == (3, 3)
        assert np.max(np.abs(array)) <= 1e-13

    def test_gen_rejects_decreasing_values(self, tmp_path):
        assert main(["gen", "--spectrum", "2:1,1:1", "--out", str(tmp_path / "A.json")]) == 2

    def test_gen_ignores_threads_variable(self, tmp_path, monkeypatch):
        monkeypatch.setenv("EIGENID_THREADS", "zero")
        assert main(["gen", "--spectrum", "1:2", "--out", str(tmp_path / "A.json")]) == 0

    def test_gen_is_deterministic(self, tmp_path):
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        main(["gen", "--spectrum", "1:3,4:1", "--seed", "42", "--out", str(first)])
        main(["gen", "--spectrum", "1:3,4:1", "--seed", "42", "--out", str(second)])
        assert first.read_bytes() == second.read_bytes()


class TestLemma1:
    def test_identity_matrix(self, matrix_path, capsys):
        assert main(["lemma1", "--matrix", matrix_path(np.eye(4)), "--split", "2"]) == 0
        result = json.loads(capsys.readouterr().out)
        assert result["p11"] == 1.0
        assert result["p22"] == 1.0
        assert result["difference"] == 0.0
        assert result["holds"] is True

    def test_haar_unitary(self, matrix_path, capsys):
        assert main(["lemma1", "--matrix", matrix_path(haar_unitary(6, seed=11)), "--split", "3"]) == 0
        result = json.loads(capsys.readouterr().out)
        assert result["difference"] <= 1e-10
        assert abs(result["complement_top"] - result["p11"]) <= 1e-10

    def test_not_unitary_exits_3(self, matrix_path):
        assert main(["lemma1", "--matrix", matrix_path(np.ones((3, 3))), "--split", "1"]) == 3

    def test_split_out_of_range_exits_2(self, matrix_path):
        assert main(["lemma1", "--matrix", matrix_path(np.eye(2)), "--split", "5"]) == 2
