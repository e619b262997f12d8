import csv
import re

import numpy as np
import pytest

from alearn.cli import main
from alearn.errors import ConfigError, FormatError
from alearn.experiment import svg
from alearn.experiment.config import config_to_dict, dump_config, load_config, parse_config, with_overrides
from alearn.experiment.runner import (HEADER_COMMENT, build_datasets, read_results, report, run_scenario,
                                      summarize, sweep, run_cells)

TINY = """
id = "tiny"
heuristics = ["BALD", "Entropy", "Random"]
seeds = [0, 1]
output_dir = "out"

[dataset.blobs]
n_per_class = 20
n_test_per_class = 10
classes = 3
dim = 2
spread = 0.4

[model]
hidden = [8]
dropout = 0.5

[train]
epochs = 3
batch_size = 16

[loop]
initial_labels = 6
query_size = 4
mc_samples = 4
label_budget = 22
"""


@pytest.fixture
def tiny():
    return parse_config(TINY)


def read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0] == HEADER_COMMENT
    return list(csv.DictReader(lines[1:]))


def mask_wall_time(text):
    lines = text.splitlines()
    return "\n".join(",".join(l.split(",")[:-1]) for l in lines)


class TestConfig:
    def test_round_trip(self, tiny):
        assert parse_config(dump_config(tiny)) == tiny
        assert config_to_dict(parse_config(dump_config(tiny))) == config_to_dict(tiny)

    def test_defaults(self, tiny):
        assert tiny.train.learning_rate == 0.05 and tiny.loop.pool_limit == -1

    def test_optional_blocks(self):
        cfg = parse_config(TINY + "\n[dataset.noise]\nlambda = 0.1\n[dataset.imbalance]\ndelta = 1\n")
        assert cfg.dataset.noise_lambda == 0.1 and cfg.dataset.imbalance_delta == 1
        assert parse_config(dump_config(cfg)) == cfg

    @pytest.mark.parametrize("edit,path", [
        (("epochs = 3", "epochs = \"three\""), "train.epochs"),
        (("dropout = 0.5", "dropout = 1.5"), "model.dropout"),
        (("spread = 0.4", "spread = 0.4\nwidth = 2"), "dataset.blobs.width"),
        (("heuristics = [\"BALD\", \"Entropy\", \"Random\"]", "heuristics = [\"Margin\"]"), "heuristics"),
        (("label_budget = 22", "label_budget = 2"), "loop.label_budget"),
    ])
    def test_errors_name_the_field(self, edit, path):
        with pytest.raises(ConfigError) as info:
            parse_config(TINY.replace(*edit))
        assert path in str(info.value)

    def test_not_toml(self):
        with pytest.raises(ConfigError):
            parse_config("id = ")

    def test_overrides(self, tiny):
        cfg = with_overrides(tiny, [5, 6], "elsewhere")
        assert cfg.seeds == [5, 6] or tuple(cfg.seeds) == (5, 6)
        assert str(cfg.output_dir) == "elsewhere"

    def test_load_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_config(tmp_path / "nope.toml")


class TestBuildDatasets:
    def test_transforms_touch_training_split_only(self, tiny):
        cfg = parse_config(TINY + "\n[dataset.imbalance]\ndelta = 1\nkeep_fraction = 0.5\n")
        train, test, shrunk = build_datasets(cfg, 0)
        assert test.class_counts().tolist() == [10, 10, 10]
        counts = train.class_counts()
        assert len(shrunk) == 1 and counts[shrunk[0]] == 10
        assert sorted(counts.tolist()) == [10, 20, 20]

    def test_deterministic(self, tiny):
        a, b = build_datasets(tiny, 3), build_datasets(tiny, 3)
        assert a[0].equals(b[0]) and a[1].equals(b[1])


@pytest.fixture(scope="module")
def tiny_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("run")
    rows = run_scenario(parse_config(TINY), out)
    return out, rows


class TestRunScenario:
    def test_row_counts(self, tiny_run):
        out, rows = tiny_run
        # 3 heuristics x 2 seeds x 5 steps (6, 10, 14, 18, 22 labels)
        assert len(rows) == 30
        results = read_csv(out / "results.csv")
        assert len(results) == 30
        assert [r["labelled_count"] for r in results[:5]] == ["6", "10", "14", "18", "22"]
        assert [r["heuristic"] for r in results[::10]] == ["BALD", "Entropy", "Random"]

    def test_summary(self, tiny_run):
        out, _ = tiny_run
        summary = read_csv(out / "summary.csv")
        assert len(summary) == 15
        random_rows = [r for r in summary if r["heuristic"] == "Random"]
        assert all(float(r["active_gain"]) == 0 for r in random_rows)
        assert all(r["n_seeds"] == "2" for r in summary)

    def test_reals_use_six_significant_digits(self, tiny_run):
        out, _ = tiny_run
        for r in read_csv(out / "results.csv"):
            assert len(re.sub(r"[^0-9]", "", r["nll"].split("e")[0]).lstrip("0")) <= 6

    def test_plots(self, tiny_run):
        out, _ = tiny_run
        names = sorted(p.name for p in out.glob("*.svg"))
        assert names == ["accuracy.svg", "f1_class_0.svg", "f1_class_1.svg", "f1_class_2.svg", "nll.svg"]
        text = (out / "nll.svg").read_text()
        entries = re.findall(r'class="legend-entry"[^>]*>.*?>(BALD|Entropy|Random)<', text, re.S)
        assert entries == ["BALD", "Entropy", "Random"]

    def test_rerun_is_byte_identical(self, tiny_run, tmp_path):
        out, _ = tiny_run
        run_scenario(parse_config(TINY), tmp_path)
        assert mask_wall_time((out / "results.csv").read_text()) == \
            mask_wall_time((tmp_path / "results.csv").read_text())
        for name in ("summary.csv", "nll.svg", "accuracy.svg", "f1_class_2.svg"):
            assert (out / name).read_bytes() == (tmp_path / name).read_bytes()

    def test_without_random_no_gain_column(self, tmp_path):
        cfg = parse_config(TINY.replace('"BALD", "Entropy", "Random"', '"BALD"').replace("[0, 1]", "[0]"))
        run_scenario(cfg, tmp_path)
        assert "active_gain" not in read_csv(tmp_path / "summary.csv")[0]


class TestSweep:
    def test_singleton_matches_run(self, tiny, tmp_path):
        path = sweep(tiny, "query_size", "4", tmp_path / "sw")
        run_scenario(tiny, tmp_path / "plain")
        swept = read_csv(path)
        plain = read_csv(tmp_path / "plain" / "summary.csv")
        assert len(swept) == len(plain)
        for s, p in zip(swept, plain):
            assert s.pop("axis") == "query_size" and s.pop("axis_value") == "4"
            s.pop("scenario"), p.pop("scenario")
            assert s == p

    def test_values_and_ids(self, tiny, tmp_path):
        path = sweep(tiny, "noise_lambda", [0.0, 0.1], tmp_path)
        rows = read_csv(path)
        assert {r["axis_value"] for r in rows} == {"0.0", "0.1"}
        assert rows[0]["scenario"] == "tiny_noise_lambda=0.0"
        assert (tmp_path / "noise_lambda=0.1" / "results.csv").exists()

    def test_unknown_axis(self, tiny, tmp_path):
        with pytest.raises(ConfigError):
            sweep(tiny, "colour", "1", tmp_path)

    def test_bad_value(self, tiny, tmp_path):
        with pytest.raises(ConfigError):
            sweep(tiny, "epochs", "1.5", tmp_path)


class TestReport:
    def test_missing(self, tmp_path):
        with pytest.raises(FormatError):
            report(tmp_path)

    def test_empty_rows(self, tmp_path):
        (tmp_path / "results.csv").write_text(HEADER_COMMENT + "\n"
                                              "scenario,heuristic,seed,step,labelled_count,nll,accuracy,wall_time\n")
        with pytest.raises(FormatError):
            report(tmp_path)
        assert not list(tmp_path.glob("*.svg"))

    def test_malformed_row_writes_nothing(self, tiny_run, tmp_path):
        out, _ = tiny_run
        lines = (out / "results.csv").read_text().splitlines()
        lines[7] = lines[7].replace(lines[7].split(",")[5], "oops", 1)
        (tmp_path / "results.csv").write_text("\n".join(lines) + "\n")
        with pytest.raises(FormatError):
            report(tmp_path)
        assert not list(tmp_path.glob("*.svg"))

    def test_missing_header_comment(self, tiny_run, tmp_path):
        out, _ = tiny_run
        (tmp_path / "results.csv").write_text("\n".join((out / "results.csv").read_text().splitlines()[1:]))
        with pytest.raises(FormatError):
            report(tmp_path)

    def test_round_trip_records(self, tiny_run):
        out, rows = tiny_run
        parsed = read_results(out / "results.csv")
        assert list(parsed) == ["BALD", "Entropy", "Random"]
        assert [r.labelled_count for r in parsed["BALD"][1]] == [6, 10, 14, 18, 22]

    def test_single_seed_band_has_zero_width(self, tiny_run, tmp_path):
        out, _ = tiny_run
        lines = (out / "results.csv").read_text().splitlines()
        keep = lines[:2] + [l for l in lines[2:] if l.split(",")[1] == "BALD" and l.split(",")[2] == "0"]
        (tmp_path / "results.csv").write_text("\n".join(keep) + "\n")
        report(tmp_path)
        text = (tmp_path / "nll.svg").read_text()
        band = re.search(r'class="band"[^>]*points="([^"]+)"', text).group(1).split()
        line = re.search(r'class="series"[^>]*points="([^"]+)"', text).group(1).split()
        # upper edge then lower edge reversed, both on the mean line
        assert band[:len(line)] == line and band[len(line):] == line[::-1]


class TestSvg:
    def test_deterministic(self):
        series = [("a", [1, 2], [0.5, 0.4], [0.1, 0.0])]
        assert svg.line_chart("t", "x", "y", series) == svg.line_chart("t", "x", "y", series)
        assert 'width="800"' in svg.line_chart("t", "x", "y", series)

    def test_empty(self):
        with pytest.raises(ValueError):
            svg.line_chart("t", "x", "y", [])


class TestCli:
    def write(self, tmp_path, text=TINY):
        path = tmp_path / "cfg.toml"
        path.write_text(text.replace('output_dir = "out"', f'output_dir = "{tmp_path / "out"}"'))
        return path

    def test_run_and_report(self, tmp_path, capsys):
        cfg = self.write(tmp_path)
        assert main(["run", "--config", str(cfg), "--seed-override", "4"]) == 0
        assert {r["seed"] for r in read_csv(tmp_path / "out" / "results.csv")} == {"4"}
        (tmp_path / "out" / "nll.svg").unlink()
        assert main(["report", "--dir", str(tmp_path / "out")]) == 0
        assert (tmp_path / "out" / "nll.svg").exists()

    def test_output_dir_flag(self, tmp_path):
        cfg = self.write(tmp_path)
        assert main(["run", "--config", str(cfg), "--seed-override", "0", "--output-dir", str(tmp_path / "o2")]) == 0
        assert (tmp_path / "o2" / "summary.csv").exists()

    def test_sweep(self, tmp_path):
        cfg = self.write(tmp_path)
        assert main(["sweep", "--config", str(cfg), "--axis", "epochs", "--values", "1,2",
                     "--seed-override", "0"]) == 0
        assert len({r["axis_value"] for r in read_csv(tmp_path / "out" / "sweep.csv")}) == 2

    def test_config_error_exit_code(self, tmp_path, capsys):
        cfg = self.write(tmp_path, TINY.replace("epochs = 3", "epochs = -3"))
        assert main(["run", "--config", str(cfg)]) == 2
        assert "train.epochs" in capsys.readouterr().err

    def test_io_error_exit_codes(self, tmp_path):
        assert main(["run", "--config", str(tmp_path / "missing.toml")]) == 3
        assert main(["report", "--dir", str(tmp_path)]) == 3
