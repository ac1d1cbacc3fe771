import json

import numpy as np
import pytest

from fuzzybns.cli import main
from fuzzybns.config import (
    DEFAULT_SPLITS,
    RunConfig,
    dump_config,
    load_config,
    parse_config,
)
from fuzzybns.errors import ConfigError

FAST_ML = """
ml.logistic.epochs = 60
ml.forest.n_trees = 10
ml.mlp.epochs = 20
ml.lstm.epochs = 6
ml.lstm_bn.epochs = 6
"""

SPLITS_2019 = """
splits.s1 = 2019-01-02:2020-02-28:2020-10-30
splits.s2 = 2019-06-03:2020-02-28:2020-10-30
"""


def write_config(tmp_path, body, name="cfg.txt"):
    path = tmp_path / name
    path.write_text(body, encoding="utf-8")
    return path


class TestConfigGrammar:
    def test_defaults_round_trip(self):
        cfg = RunConfig()
        assert parse_config(dump_config(cfg)) == cfg

    def test_custom_round_trip(self):
        text = (
            "data.path = x.csv\n"
            "fuzzy.lambda_f = 0.7\n"
            "features.jump_threshold = 2.0\n"
            "ml.algorithms = logistic,tree\n"
            "ml.logistic.learning_rate = 0.05\n"
            "ml.forest.max_features = none\n"
            "splits.only = 2019-01-02:2020-02-28:2020-10-30\n"
            "sim.theta = 0.25\n"
            "run.seed = 99\n"
        )
        cfg = parse_config(text)
        assert cfg.lambda_f == 0.7
        assert cfg.algorithms == ("logistic", "tree")
        assert cfg.hyperparameters["forest"]["max_features"] is None
        assert cfg.splits[0].name == "only"
        assert cfg.sim.theta == 0.25
        assert parse_config(dump_config(cfg)) == cfg

    def test_comments_and_blank_lines_ignored(self):
        cfg = parse_config("# a comment\n\nrun.seed = 5\n")
        assert cfg.seed == 5
        assert cfg.splits == DEFAULT_SPLITS

    @pytest.mark.parametrize("line", [
        "unknown.key = 1",
        "fuzzy.lambda_f = nope",
        "fuzzy.lambda_f = 1.5",
        "ml.svm.c = 1",
        "ml.logistic.gamma = 1",
        "splits.bad = 2019-01-01:2018-01-01:2020-01-01",
        "splits.short = 2019-01-01:2020-01-01",
        "features.window = 0",
        "eval.theta_method = argmax",
        "just words",
    ])
    def test_invalid_inputs_rejected(self, line):
        with pytest.raises(ConfigError):
            parse_config(line)

    def test_load_config_from_file(self, tmp_path):
        path = write_config(tmp_path, "run.seed = 123\n")
        assert load_config(path).seed == 123


class TestExitCodes:
    def test_bad_config_file_is_2(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "nonsense.key = 1\n")
        assert main(["fuzzify", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2

    def test_missing_data_is_2_without_path(self, tmp_path):
        assert main(["fuzzify", "--out", str(tmp_path / "o")]) == 2

    def test_unreadable_data_is_3(self, tmp_path):
        assert main(["fuzzify", "--data", str(tmp_path / "absent.csv"),
                     "--out", str(tmp_path / "o")]) == 3

    def test_unstable_step_is_4(self, tmp_path):
        cfg = write_config(tmp_path, "sim.lam = 300.0\nsim.dt = 0.004\nsim.horizon = 1.0\nsim.corr_s = 0.5\n")
        assert main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 4

    def test_success_is_0(self, tmp_path, short_csv):
        assert main(["fuzzify", "--data", str(short_csv), "--out", str(tmp_path / "o")]) == 0


class TestFuzzifyCommand:
    def test_output_schema_and_values(self, tmp_path, short_csv):
        out = tmp_path / "o"
        assert main(["fuzzify", "--data", str(short_csv), "--out", str(out),
                     "--lambda-f", "0.5"]) == 0
        lines = (out / "fuzzy.csv").read_text().splitlines()
        assert lines[0] == "date,s_l,s_m,s_u,expectation"
        _, s_l, s_m, s_u, e = lines[1].split(",")
        expected = ((1 - 0.5) * float(s_l) + float(s_m) + 0.5 * float(s_u)) / 2
        assert float(e) == pytest.approx(expected, abs=1e-5)

    def test_single_row_file_still_fuzzifies(self, tmp_path):
        data = tmp_path / "one.csv"
        data.write_text(
            "Date,Open,High,Low,Close,Adj Close,Volume\n"
            "2020-01-02,100,102,99,101,101,1000\n",
            encoding="utf-8",
        )
        out = tmp_path / "o"
        assert main(["fuzzify", "--data", str(data), "--out", str(out)]) == 0
        assert len((out / "fuzzy.csv").read_text().splitlines()) == 2


class TestFeaturesCommand:
    def test_row_count_and_monotone_threshold(self, tmp_path, short_csv):
        out1 = tmp_path / "c1"
        out2 = tmp_path / "c2"
        assert main(["features", "--data", str(short_csv), "--out", str(out1),
                     "--jump-threshold", "1.0"]) == 0
        assert main(["features", "--data", str(short_csv), "--out", str(out2),
                     "--jump-threshold", "2.0"]) == 0

        def labels(path):
            rows = (path / "windows.csv").read_text().splitlines()[1:]
            return np.array([int(r.rsplit(",", 1)[1]) for r in rows])

        l1, l2 = labels(out1), labels(out2)
        n_bars = len(short_csv.read_text().splitlines()) - 1
        assert len(l1) == (n_bars - 1) - 10 - 10 + 1
        assert l2.sum() <= l1.sum()
        assert not np.any(l2 & ~l1)


class TestSimulateCommand:
    def test_theta_zero_columns_identical(self, tmp_path):
        cfg = write_config(tmp_path, "sim.theta = 0.0\nsim.theta_prime = 0.0\n")
        out = tmp_path / "o"
        assert main(["simulate", "--config", str(cfg), "--out", str(out)]) == 0
        rows = (out / "correlation_decay.csv").read_text().splitlines()[1:]
        for row in rows:
            _, _, c, r = row.split(",")
            assert c == r

    def test_classical_column_nonincreasing(self, tmp_path):
        for seed in ("1", "2", "3"):
            out = tmp_path / f"o{seed}"
            assert main(["simulate", "--out", str(out), "--seed", seed]) == 0
            rows = (out / "correlation_decay.csv").read_text().splitlines()[1:]
            vals = [float(r.split(",")[2]) for r in rows]
            assert all(a >= b for a, b in zip(vals, vals[1:]))

    def test_rerun_is_byte_identical(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        main(["simulate", "--out", str(out1), "--seed", "5"])
        main(["simulate", "--out", str(out2), "--seed", "5"])
        for name in ("classical_path.csv", "refined_path.csv", "correlation_decay.csv",
                     "paths.png", "correlation_decay.png"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes(), name


@pytest.fixture(scope="module")
def pipeline_cfg(tmp_path_factory, short_csv):
    tmp = tmp_path_factory.mktemp("pipe")
    body = f"data.path = {short_csv}\n{FAST_ML}{SPLITS_2019}run.seed = 11\n"
    return write_config(tmp, body), tmp


class TestPipelineCommand:
    def test_manifest_complete_and_covers_outputs(self, pipeline_cfg):
        cfg, tmp = pipeline_cfg
        out = tmp / "run1"
        assert main(["pipeline", "--config", str(cfg), "--out", str(out)]) == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["complete"] is True
        expected = {
            "fuzzy.csv", "windows.csv", "report_s1.csv", "report_s2.csv",
            "theta_summary.json", "theta_summary.png", "resolved_config.txt",
        }
        assert expected <= set(manifest["files"])
        for rel in manifest["files"]:
            assert (out / rel).exists()

    def test_reruns_are_byte_identical(self, pipeline_cfg):
        cfg, tmp = pipeline_cfg
        out1, out2 = tmp / "r1", tmp / "r2"
        assert main(["pipeline", "--config", str(cfg), "--out", str(out1)]) == 0
        assert main(["pipeline", "--config", str(cfg), "--out", str(out2)]) == 0
        m1 = (out1 / "manifest.json").read_bytes()
        m2 = (out2 / "manifest.json").read_bytes()
        assert m1 == m2

    def test_resolved_config_round_trips(self, pipeline_cfg):
        cfg, tmp = pipeline_cfg
        out = tmp / "r3"
        assert main(["pipeline", "--config", str(cfg), "--out", str(out)]) == 0
        resolved = load_config(out / "resolved_config.txt")
        assert resolved == load_config(cfg)

    def test_failed_pipeline_marks_manifest_incomplete(self, tmp_path, short_csv):
        body = f"data.path = {short_csv}\nsplits.outside = 1999-01-04:1999-06-30:1999-12-31\n"
        cfg = write_config(tmp_path, body)
        out = tmp_path / "o"
        assert main(["pipeline", "--config", str(cfg), "--out", str(out)]) == 3
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["complete"] is False


class TestTrainCommand:
    def test_saves_models_and_logs(self, tmp_path, short_csv):
        body = (
            f"data.path = {short_csv}\n{FAST_ML}{SPLITS_2019}"
            "ml.algorithms = logistic,tree\nrun.seed = 3\n"
        )
        cfg = write_config(tmp_path, body)
        out = tmp_path / "o"
        assert main(["train", "--config", str(cfg), "--out", str(out), "--split", "s1"]) == 0
        assert (out / "model_logistic.npz").exists()
        assert (out / "model_tree.npz").exists()
        assert (out / "training_log_logistic.csv").exists()
        assert main(["train", "--config", str(cfg), "--out", str(out), "--split", "nope"]) == 2
