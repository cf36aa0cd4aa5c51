import hashlib
import json

import pytest

import luxbox as lb
from luxbox.cli import EXIT_IO, EXIT_OK, EXIT_VALIDATION, main
from tests.test_datasets import TINY_SPACE, write_label_file


def sha(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


@pytest.fixture()
def tiny_space_file(tmp_path):
    path = tmp_path / "space.json"
    path.write_text(json.dumps(TINY_SPACE.to_dict()))
    return path


@pytest.fixture()
def tiny_configs_file(tmp_path, tiny_space_file):
    out = tmp_path / "configs.csv"
    assert main(["generate", "--space", str(tiny_space_file), "--out", str(out)]) == EXIT_OK
    return out


@pytest.fixture()
def tiny_labels_file(tmp_path, tiny_configs_file):
    out = tmp_path / "labels.csv"
    code = main(["label", str(tiny_configs_file), "--seed", "7", "--out", str(out)])
    assert code == EXIT_OK
    return out


@pytest.fixture()
def tiny_model_file(tmp_path, tiny_labels_file):
    out = tmp_path / "model.json"
    code = main(
        ["train", str(tiny_labels_file), "--epochs", "3", "--batch-size", "2", "--out", str(out)]
    )
    assert code == EXIT_OK
    return out


class TestGenerate:
    def test_presets(self, tmp_path):
        out1 = tmp_path / "t1.csv"
        out4 = tmp_path / "t4.csv"
        assert main(["generate", "--preset", "table1", "--out", str(out1)]) == EXIT_OK
        assert main(["generate", "--preset", "table4", "--out", str(out4)]) == EXIT_OK
        n1 = len([l for l in out1.read_text().splitlines() if not l.startswith("#")]) - 1
        n4 = len([l for l in out4.read_text().splitlines() if not l.startswith("#")]) - 1
        assert (n1, n4) == (2880, 64)

    def test_singleton_space(self, tmp_path):
        space = {
            "orientations": ["S"],
            "dimensions": [[4.0, 5.0]],
            "reflectances": [0.5],
            "shadings": ["none"],
            "sill_heights": [0.8],
            "window_heights": [1.5],
            "divisions": ["one_full_width"],
        }
        sf = tmp_path / "single.json"
        sf.write_text(json.dumps(space))
        out = tmp_path / "one.csv"
        assert main(["generate", "--space", str(sf), "--out", str(out)]) == EXIT_OK
        rows = [l for l in out.read_text().splitlines() if not l.startswith("#")]
        assert len(rows) - 1 == 1

    def test_bad_space_file_exit_2(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{}")
        assert main(["generate", "--space", str(bad), "--out", str(tmp_path / "x.csv")]) == EXIT_VALIDATION

    def test_missing_space_file_exit_2(self, tmp_path):
        code = main(["generate", "--space", str(tmp_path / "absent.json"), "--out", str(tmp_path / "x.csv")])
        assert code == EXIT_VALIDATION  # unreadable space file is a validation failure


class TestLabel:
    def test_proxy_row_count(self, tiny_labels_file):
        rows = [l for l in tiny_labels_file.read_text().splitlines() if not l.startswith("#")]
        assert len(rows) - 1 == TINY_SPACE.size

    def test_same_seed_identical_digest(self, tmp_path, tiny_configs_file):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["label", str(tiny_configs_file), "--seed", "3", "--out", str(a)])
        main(["label", str(tiny_configs_file), "--seed", "3", "--out", str(b)])
        assert sha(a) == sha(b)

    def test_ingest_missing_row_names_id(self, tmp_path, tiny_configs_file, capsys):
        src = tmp_path / "ext.csv"
        write_label_file(src, [[0, 0.5, 0.4, 0.6, 0.1, 0.05, 0.3, 0.9, 0.8]])
        code = main(
            ["label", str(tiny_configs_file), "--oracle", "ingest", "--source", str(src), "--out", str(tmp_path / "o.csv")]
        )
        assert code == EXIT_VALIDATION
        assert "missing config ids" in capsys.readouterr().err

    def test_missing_configs_file_exit_3(self, tmp_path):
        code = main(["label", str(tmp_path / "absent.csv"), "--out", str(tmp_path / "o.csv")])
        assert code == EXIT_IO


class TestTrain:
    def test_echoes_hyperparameters(self, tmp_path, tiny_labels_file, capsys):
        out = tmp_path / "m.json"
        code = main(["train", str(tiny_labels_file), "--epochs", "3", "--batch-size", "2", "--out", str(out)])
        assert code == EXIT_OK
        stdout = capsys.readouterr().out
        assert "epochs=3" in stdout and "batch=2" in stdout and "neurons=40" in stdout
        assert out.exists()

    def test_default_flags_echo_study_setup(self, tmp_path, tiny_labels_file, capsys):
        out = tmp_path / "m.json"
        main(["train", str(tiny_labels_file), "--out", str(out)])
        stdout = capsys.readouterr().out
        assert "epochs=50" in stdout and "batch=10" in stdout and "neurons=40" in stdout

    def test_seed_reproduces_model_bytes(self, tmp_path, tiny_labels_file):
        m1, m2 = tmp_path / "m1.json", tmp_path / "m2.json"
        args = ["train", str(tiny_labels_file), "--epochs", "3", "--batch-size", "2", "--seed", "5"]
        main(args + ["--out", str(m1)])
        main(args + ["--out", str(m2)])
        assert sha(m1) == sha(m2)


class TestValidateCmd:
    def test_report_structure(self, tmp_path, tiny_model_file, tiny_labels_file, capsys):
        report = tmp_path / "report.csv"
        code = main(["validate", str(tiny_model_file), str(tiny_labels_file), "--report", str(report)])
        assert code == EXIT_OK
        lines = [l for l in report.read_text().splitlines() if not l.startswith("#")]
        assert lines[0] == "metric,mae,mse,benchmark_mae,benchmark_mse"
        assert len(lines) - 1 == 8
        assert [l.split(",")[0] for l in lines[1:]] == list(lb.METRIC_NAMES)


class TestExplainCmd:
    def test_flags_single_sample(self, tmp_path, tiny_model_file, tiny_configs_file, capsys):
        out = tmp_path / "shap"
        code = main(
            [
                "explain", str(tiny_model_file),
                "--background", str(tiny_configs_file),
                "--orientation", "S", "--width", "4", "--depth", "5",
                "--reflectance", "0.3", "--shading", "none",
                "--sill-height", "0.6", "--window-height", "1.5",
                "--divisions", "one_full_width",
                "--out", str(out),
            ]
        )
        assert code == EXIT_OK
        stdout = capsys.readouterr().out
        assert "efficiency residual" in stdout
        assert (tmp_path / "shap.summary.csv").exists()
        assert (tmp_path / "shap.scatter.csv").exists()
        assert (tmp_path / "shap.base.json").exists()

    def test_summary_sorted_descending(self, tmp_path, tiny_model_file, tiny_configs_file):
        out = tmp_path / "shap"
        main(
            [
                "explain", str(tiny_model_file),
                "--samples", str(tiny_configs_file),
                "--background", str(tiny_configs_file),
                "--out", str(out),
            ]
        )
        lines = (tmp_path / "shap.summary.csv").read_text().strip().splitlines()[1:]
        by_metric = {}
        for line in lines:
            metric, rank, group, value = line.split(",")
            by_metric.setdefault(metric, []).append(float(value))
        for values in by_metric.values():
            assert values == sorted(values, reverse=True)

    def test_requires_sample_source(self, tiny_model_file):
        assert main(["explain", str(tiny_model_file)]) == EXIT_VALIDATION


class TestParser:
    def test_unknown_command_exits_2(self):
        with pytest.raises(SystemExit) as err:
            main(["frobnicate"])
        assert err.value.code == 2
