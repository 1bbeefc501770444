import io
import json

import numpy as np
import pytest

from sigtron.cli import UsageError, main, parse_args
from sigtron.data import Dataset, split_half, write_dataset


def _run(argv, environ=None):
    out = io.StringIO()
    code = main(argv, environ or {}, out)
    return code, out.getvalue()


@pytest.fixture(scope="module")
def small_files(tmp_path_factory):
    rng = np.random.default_rng(11)
    X = np.vstack([rng.normal([1.0, 0.0, 0.5], 1.0, (20, 3)), rng.normal([-1.0, 0.0, 0.0], 1.0, (30, 3))])
    y = np.r_[np.ones(20, int), -np.ones(30, int)]
    perm = rng.permutation(50)
    train, test = split_half(Dataset(X[perm], y[perm], ("-1", "1")))
    d = tmp_path_factory.mktemp("cli")
    write_dataset(train, d / "train.csv")
    write_dataset(test, d / "test.csv")
    return str(d / "train.csv"), str(d / "test.csv")


class TestParsing:
    def test_defaults(self):
        args = parse_args(["train", "a.csv"], {})
        assert args.loss == "sic" and args.lam is None and args.cv_folds == 4
        assert (args.m, args.c2, args.calpha_mag) == (40, 0.4, 2.0)

    def test_env_override(self):
        env = {"SGT_CALPHA_MAG": "3.5", "SGT_LOSS": "focal", "SGT_SPLIT_HALF": "1"}
        args = parse_args(["train", "a.csv"], env)
        assert args.calpha_mag == 3.5 and args.loss == "focal" and args.split_half

    def test_flag_beats_env(self):
        args = parse_args(["train", "a.csv", "--m", "7"], {"SGT_M": "3"})
        assert args.m == 7

    def test_bad_env(self):
        with pytest.raises(UsageError):
            parse_args(["train", "a.csv"], {"SGT_LOSS": "hinge"})

    def test_lambda_and_folds_exclusive(self):
        with pytest.raises(UsageError):
            parse_args(["train", "a.csv", "--lambda", "1", "--cv-folds", "3"], {})

    def test_fraction_alphas(self):
        args = parse_args(["train", "a.csv", "--alpha-pos", "7/8", "--alpha-neg", "1.25"], {})
        assert str(args.alpha_pos) == "7/8" and str(args.alpha_neg) == "5/4"


class TestExitCodes:
    def test_usage(self, capsys):
        assert _run(["train"])[0] == 1
        assert _run(["frobnicate", "a.csv"])[0] == 1
        assert _run(["train", "a.csv", "--jobs", "0"])[0] == 1

    def test_bad_focal_parameter(self, small_files):
        assert _run(["train", *small_files, "--loss", "focal", "--pi", "1.5", "--lambda", "1"])[0] == 1

    def test_missing_file(self, tmp_path):
        assert _run(["stats", str(tmp_path / "nope.csv")])[0] == 2

    def test_parse_error_names_line(self, tmp_path, capsys):
        p = tmp_path / "bad.csv"
        p.write_text("1,2,1\n3,oops,-1\n")
        assert _run(["stats", str(p)])[0] == 2
        assert f"{p}:2" in capsys.readouterr().err

    def test_sweep_needs_test_split(self, small_files):
        assert _run(["sweep", small_files[0], "--alphas", "1"])[0] == 1


class TestStats:
    def test_fixture_numbers(self, fixture_paths):
        code, text = _run(["stats", *fixture_paths])
        assert code == 0
        assert text.splitlines() == [
            "split,n,r_c,r_sc",
            "combined,300,0.3333,0.5190",
            "train,150,0.2821,0.4402",
            "test,150,0.3889,0.6048",
        ]

    def test_single_split(self, fixture_paths):
        code, text = _run(["stats", fixture_paths[0]])
        assert code == 0
        assert text.splitlines()[-1] == "test: n/a"

    def test_split_half(self, fixture_paths):
        code, text = _run(["stats", fixture_paths[0], "--split-half"])
        assert code == 0 and "test,75," in text

    def test_multiclass(self, tmp_path, three_blobs):
        write_dataset(three_blobs, tmp_path / "m.csv")
        code, text = _run(["stats", str(tmp_path / "m.csv")])
        assert code == 0
        head, row = text.splitlines()[:2]
        assert head == "split,n,r_c_min,r_c_max,r_sc_min,r_sc_max"
        assert row.startswith("combined,60,0.5000,0.5000,")


class TestTrainAndCv:
    def test_train_writes_model(self, small_files, tmp_path):
        out = tmp_path / "model.csv"
        code, text = _run(["train", *small_files, "--alpha-pos", "3/4", "--alpha-neg", "5/4",
                           "--lambda", "0.25", "--out", str(out)])
        assert code == 0
        assert "lambda: 0.25" in text and "test accuracy:" in text
        lines = out.read_text().splitlines()
        assert lines[0] == "class,w1,w2,w3,b" and len(lines) == 2
        cfg = json.loads((tmp_path / "model.csv.json").read_text())["config"]
        assert cfg["alpha_pos"] == "3/4" and cfg["lam"] == 0.25

    def test_cv_table(self, small_files):
        code, text = _run(["cv", small_files[0], "--loss", "logistic", "--cv-folds", "3"])
        assert code == 0
        lines = text.splitlines()
        assert lines[0] == "lambda,cv_accuracy" and len(lines) == 22
        assert lines[-1].startswith("best lambda: ")


class TestSweepAndCompare:
    def test_sweep_deterministic(self, small_files, tmp_path):
        for name in ("a", "b"):
            code, _ = _run(["sweep", *small_files, "--alphas", "2", "--jobs", "1" if name == "a" else "2",
                            "--out", str(tmp_path / name)])
            assert code == 0
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
        side = json.loads((tmp_path / "a.json").read_text())
        assert side["config"]["alphas"] == 2 and "best_cell" in side

    def test_sweep_stdout_grid(self, small_files):
        code, text = _run(["sweep", *small_files, "--alphas", "6", "--cv-folds", "2"])
        assert code == 0
        lines = text.splitlines()
        start = next(i for i, l in enumerate(lines) if l.startswith("alpha_pos"))
        grid = lines[start:start + 13]
        assert grid[0] == "alpha_pos\\alpha_neg,0,1/2,2/3,3/4,4/5,5/6,7/6,6/5,5/4,4/3,3/2,2"
        assert all(row.count(",") == 12 for row in grid)
        assert [row.split(",")[0] for row in grid[1:]] == grid[0].split(",")[1:]
        assert "fixed cell" not in text

    def test_compare_fixed_cell(self, small_files):
        code, text = _run(["compare", *small_files, "--lambda", "0.5",
                           "--alpha-pos", "3/4", "--alpha-neg", "5/4"])
        assert code == 0
        lines = text.splitlines()
        assert lines[0] == "model,test_accuracy,lambda"
        rows = lines[1:-1]
        assert len(rows) == 1 + 152 + 1
        assert sum("focal" in r for r in rows) == 152
        assert sum("(logistic-equivalent)" in r for r in rows) == 1
        assert all(r.endswith(",0.5") for r in rows)
        assert lines[-1].startswith("focal models: 152")

    def test_sweep_fixed_lambda(self, small_files, tmp_path):
        code, _ = _run(["sweep", *small_files, "--alphas", "1", "--lambda", "0.125",
                        "--out", str(tmp_path / "s")])
        assert code == 0
        side = json.loads((tmp_path / "s.json").read_text())
        assert side["chosen_lambda"] == [[[0.125]] * 2] * 2

    def test_compare_needs_both_alphas(self, small_files):
        assert _run(["compare", *small_files, "--lambda", "1", "--alpha-pos", "1/2"])[0] == 1
