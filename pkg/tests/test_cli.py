import json

import pytest

from grouptest.cli import main


def run_cli(*argv):
    return main(list(argv))


@pytest.fixture
def matrix_file(tmp_path):
    path = tmp_path / "matrix.json"
    code = run_cli(
        "design", "--kind", "bernoulli", "--n-items", "12", "--n-tests", "8",
        "--p", "0.3", "--seed", "42", "-o", str(path),
    )
    assert code == 0
    return path


@pytest.fixture
def outcome_file(tmp_path, matrix_file):
    # outcomes consistent with defective set {0, 3}
    from grouptest.design import DesignMatrix
    from grouptest.model import ItemSet, run_tests

    matrix = DesignMatrix.from_json_dict(json.loads(matrix_file.read_text()))
    y = run_tests(matrix, ItemSet((0, 3), universe_size=12))
    path = tmp_path / "outcomes.json"
    path.write_text(json.dumps(y.to_json_dict()))
    return path


class TestDesign:
    def test_writes_valid_matrix(self, matrix_file):
        data = json.loads(matrix_file.read_text())
        assert data["n_tests"] == 8 and data["n_items"] == 12
        assert data["design_kind"] == "bernoulli"
        assert data["params"]["p"] == 0.3

    def test_optimal_parameter_from_k(self, tmp_path):
        path = tmp_path / "m.json"
        assert run_cli(
            "design", "--kind", "constant_column", "--n-items", "20", "--n-tests", "30",
            "--k", "4", "--seed", "1", "-o", str(path),
        ) == 0
        data = json.loads(path.read_text())
        assert data["params"]["L"] == 5  # floor((30/4) ln 2)

    def test_seed_required(self, tmp_path, capsys):
        code = run_cli(
            "design", "--kind", "bernoulli", "--n-items", "4", "--n-tests", "2",
            "--p", "0.5", "-o", str(tmp_path / "m.json"),
        )
        assert code == 1

    def test_bad_probability_exits_one(self, tmp_path):
        code = run_cli(
            "design", "--kind", "bernoulli", "--n-items", "4", "--n-tests", "2",
            "--p", "1.5", "--seed", "3", "-o", str(tmp_path / "m.json"),
        )
        assert code == 1

    def test_deterministic_output(self, tmp_path):
        paths = [tmp_path / "a.json", tmp_path / "b.json"]
        for p in paths:
            run_cli(
                "design", "--kind", "near_constant_column", "--n-items", "9",
                "--n-tests", "7", "--column-weight", "3", "--seed", "5", "-o", str(p),
            )
        assert paths[0].read_bytes() == paths[1].read_bytes()


class TestDecode:
    @pytest.mark.parametrize("algo", ["comp", "dd", "scomp", "wscomp"])
    def test_all_algorithms(self, tmp_path, matrix_file, outcome_file, algo):
        out = tmp_path / f"{algo}.json"
        code = run_cli(
            "decode", "--matrix", str(matrix_file), "--outcomes", str(outcome_file),
            "--algo", algo, "-o", str(out),
        )
        assert code == 0
        result = json.loads(out.read_text())
        assert set(result) == {"estimate", "definite_non_defectives", "dd_core", "trace"}
        assert set(result["dd_core"]) <= set(result["estimate"])

    def test_trace_flag(self, tmp_path, matrix_file, outcome_file):
        out = tmp_path / "t.json"
        run_cli(
            "decode", "--matrix", str(matrix_file), "--outcomes", str(outcome_file),
            "--algo", "wscomp", "--trace", "-o", str(out),
        )
        traced = json.loads(out.read_text())["trace"]
        assert traced is not None
        run_cli(
            "decode", "--matrix", str(matrix_file), "--outcomes", str(outcome_file),
            "--algo", "wscomp", "-o", str(out),
        )
        assert json.loads(out.read_text())["trace"] is None

    def test_missing_matrix_file_exits_three(self, tmp_path, outcome_file):
        code = run_cli(
            "decode", "--matrix", str(tmp_path / "nope.json"),
            "--outcomes", str(outcome_file), "--algo", "comp",
        )
        assert code == 3

    def test_malformed_json_exits_three(self, tmp_path, outcome_file):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code = run_cli(
            "decode", "--matrix", str(bad), "--outcomes", str(outcome_file), "--algo", "comp",
        )
        assert code == 3

    def test_unknown_algorithm_exits_one(self, matrix_file, outcome_file):
        code = run_cli(
            "decode", "--matrix", str(matrix_file), "--outcomes", str(outcome_file),
            "--algo", "magic",
        )
        assert code == 1


class TestSimulate:
    def config(self, tmp_path, with_seed=True):
        cfg = {
            "n_items": 25,
            "n_defectives": 2,
            "design_kind": "bernoulli",
            "t_values": [8, 14],
            "n_trials": 20,
            "algorithms": ["comp", "dd", "scomp", "wscomp"],
            "alpha": 1.0,
        }
        if with_seed:
            cfg["master_seed"] = 77
        path = tmp_path / "sim.json"
        path.write_text(json.dumps(cfg))
        return path

    def test_byte_identical_reruns(self, tmp_path):
        cfg = self.config(tmp_path)
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run_cli("simulate", "--config", str(cfg), "-o", str(out1)) == 0
        assert run_cli("simulate", "--config", str(cfg), "-o", str(out2)) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_seed_flag_overrides_config(self, tmp_path):
        cfg = self.config(tmp_path)
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        run_cli("simulate", "--config", str(cfg), "-o", str(out1))
        run_cli("simulate", "--config", str(cfg), "--seed", "78", "-o", str(out2))
        assert out1.read_bytes() != out2.read_bytes()

    def test_seed_required_somewhere(self, tmp_path):
        cfg = self.config(tmp_path, with_seed=False)
        assert run_cli("simulate", "--config", str(cfg), "-o", str(tmp_path / "x.csv")) == 1
        assert run_cli("simulate", "--config", str(cfg), "--seed", "5", "-o", str(tmp_path / "x.csv")) == 0


class TestTheory:
    def test_snr_prints_reference_values(self, capsys):
        assert run_cli("theory", "snr", "--n", "2", "--k", "1") == 0
        out = capsys.readouterr().out
        assert "0.534522" in out
        assert "0.377964" in out

    def test_f_grid_csv(self, tmp_path):
        out = tmp_path / "f.csv"
        assert run_cli("theory", "f", "--k-max", "2", "--n-span", "4", "-o", str(out)) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "k,N,f_value,residual_19,snr_w,snr_u"
        assert len(lines) == 1 + 2 * 4
        assert all(float(line.split(",")[2]) > 0 for line in lines[1:])


class TestVerify:
    def test_passes_on_small_budget(self, capsys):
        assert run_cli("verify", "--n-max", "7", "--trials", "40") == 0
        out = capsys.readouterr().out
        assert "worst |dev|" in out
        assert "all checks passed" in out

    def test_excessive_budget_rejected(self):
        assert run_cli("verify", "--n-max", "40") == 1


class TestPlot:
    def test_plot_from_simulated_csv(self, tmp_path):
        cfg = tmp_path / "sim.json"
        cfg.write_text(
            json.dumps(
                {
                    "n_items": 25,
                    "n_defectives": 2,
                    "design_kind": "bernoulli",
                    "t_values": [8, 14, 20],
                    "n_trials": 15,
                    "master_seed": 3,
                }
            )
        )
        csv_path = tmp_path / "out.csv"
        run_cli("simulate", "--config", str(cfg), "-o", str(csv_path))
        svg_path = tmp_path / "fig.svg"
        code = run_cli(
            "plot", "--input", str(csv_path), "--metric", "success_prob",
            "--overlay-counting-bound", "-o", str(svg_path),
        )
        assert code == 0
        assert svg_path.read_text().startswith("<svg")

    def test_missing_column_exits_one(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("T,algorithm\n5,comp\n")
        assert run_cli("plot", "--input", str(bad), "--metric", "f1", "-o", str(tmp_path / "x.svg")) == 1


class TestUsage:
    def test_unknown_subcommand(self, capsys):
        assert run_cli("frobnicate") == 1

    def test_no_subcommand(self):
        assert run_cli() == 1

    def test_theory_without_subcommand(self):
        assert run_cli("theory") == 1
