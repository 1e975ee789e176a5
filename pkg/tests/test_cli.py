import io
import json

import pytest

from src.cli.display import Display
from src.cli.report import RunReport
from src.utils.config import create_default_config, load_config, merge_config, resolve_seed, save_config
from src.utils.errors import EXIT_GUARD, EXIT_NO, EXIT_USAGE, EXIT_YES


class TestModelChecking:
    def test_eval(self, run_cli, instance):
        code, report, _ = run_cli("eval", instance("K3.struct"), instance("triangle.fo"))
        assert code == EXIT_YES
        assert report["answer"] is True
        assert report["result"]["fragment"] == "Sigma1"
        code, report, _ = run_cli("eval", instance("P3.struct"), instance("triangle.fo"))
        assert code == EXIT_NO
        assert report["answer"] is False

    def test_eval_pruned(self, run_cli, instance):
        code, report, _ = run_cli("eval", instance("K3.struct"), instance("triangle.fo"), "--pruned")
        assert code == EXIT_YES
        assert report["algorithm"] == "pruned"

    @pytest.mark.parametrize("mode", ["naive", "hom", "colorcoding"])
    def test_mc_sigma1(self, run_cli, instance, mode):
        code, report, _ = run_cli("mc-sigma1", instance("C5.struct"), instance("path3.fo"), "--mode", mode)
        assert code == EXIT_YES
        assert report["algorithm"] == mode
        if mode != "naive":
            assert report["result"]["verified"] is True
            assert sorted(report["result"]["witness"]) == ["x1", "x2", "x3"]

    def test_color_coding_reports_its_error_bound(self, run_cli, instance):
        _, report, _ = run_cli("mc-sigma1", instance("C5.struct"), instance("path3.fo"))
        assert report["error_bound"] == 0.0
        _, report, _ = run_cli("mc-sigma1", instance("C5.struct"), instance("path3.fo"),
                               "--hash-mode", "randomized")
        assert 0 < report["error_bound"] <= 1e-6

    def test_formula_with_relation_variable_is_rejected(self, run_cli, instance):
        code, report, err = run_cli("eval", instance("P3.struct"), instance("vc.fo"))
        assert code == EXIT_USAGE
        assert report is None
        assert "fagin" in err


class TestHomomorphisms:
    def test_hom(self, run_cli, instance):
        code, report, _ = run_cli("hom", instance("K3.struct"), instance("C5.struct"))
        assert code == EXIT_YES
        assert report["result"]["width"] == 2
        assert set(report["result"]["homomorphism"]) == {"0", "1", "2", "3", "4"}
        code, _, _ = run_cli("hom", instance("K2.struct"), instance("C5.struct"))
        assert code == EXIT_NO

    @pytest.mark.parametrize("method", ["--exact", "--brute"])
    def test_other_methods(self, run_cli, instance, method):
        code, _, _ = run_cli("hom", instance("K3.struct"), instance("C5.struct"), method)
        assert code == EXIT_YES

    def test_decomposition_file(self, run_cli, instance, tmp_path):
        td = tmp_path / "p3.td"
        td.write_text("node 0 : 0 1\nnode 1 : 1 2\nedge 0 1\n")
        code, report, _ = run_cli("hom", instance("K2.struct"), instance("P3.struct"), "--td", td)
        assert code == EXIT_YES
        assert report["algorithm"] == "dp/td-file"

    def test_emb(self, run_cli, instance):
        code, report, _ = run_cli("emb", instance("C5.struct"), instance("P3.struct"))
        assert code == EXIT_YES
        assert report["result"]["verified"] is True
        code, _, _ = run_cli("emb", instance("C5.struct"), instance("K3.struct"))
        assert code == EXIT_NO

    def test_guard(self, run_cli, instance):
        code, _, err = run_cli("--max-candidates", "5", "hom", instance("K3.struct"), instance("C5.struct"))
        assert code == EXIT_GUARD
        assert "TooLarge" in err


class TestFagin:
    def test_vertex_cover(self, run_cli, instance):
        code, report, _ = run_cli("fagin", instance("vc.fo"), instance("P3.struct"), 1)
        assert code == EXIT_YES
        assert report["result"]["witness"] == [[1]]
        assert (report["result"]["l"], report["result"]["m"]) == (2, 3)
        code, _, _ = run_cli("fagin", instance("vc.fo"), instance("K3.struct"), 1)
        assert code == EXIT_NO

    def test_dominating_set_needs_brute_force(self, run_cli, instance):
        code, _, err = run_cli("fagin", instance("ds.fo"), instance("P3.struct"), 1)
        assert code == EXIT_USAGE
        assert "NotPositive" in err
        code, report, _ = run_cli("fagin", instance("ds.fo"), instance("P3.struct"), 1, "--mode", "brute")
        assert code == EXIT_YES
        assert report["result"]["witness"] == [[1]]

    def test_bounded(self, run_cli, instance):
        code, _, _ = run_cli("fagin", instance("clique_bounded.fo"), instance("K3.struct"), 3, "--mode", "bounded")
        assert code == EXIT_YES
        code, _, _ = run_cli("fagin", instance("clique_bounded.fo"), instance("P3.struct"), 3, "--mode", "bounded")
        assert code == EXIT_NO

    def test_slicewise(self, run_cli, instance):
        code, report, _ = run_cli("fagin", instance("vc.fo"), instance("P3.struct"), 1, "--mode", "slicewise")
        assert code == EXIT_YES
        assert "sentence_class" in report["result"]

    def test_k_above_tuple_count(self, run_cli, instance):
        code, _, _ = run_cli("fagin", instance("vc.fo"), instance("K3.struct"), 4)
        assert code == EXIT_USAGE


class TestOracles:
    def test_clique(self, run_cli, instance):
        code, report, _ = run_cli("clique", instance("K3.struct"), 3)
        assert code == EXIT_YES
        assert report["result"]["clique"] == [0, 1, 2]
        code, _, _ = run_cli("clique", instance("C5.struct"), 3)
        assert code == EXIT_NO

    def test_wsat(self, run_cli, instance):
        code, report, _ = run_cli("wsat", instance("three_cnf.prop"), 1)
        assert code == EXIT_YES
        assert report["result"]["true_variables"] == ["X"]
        assert report["result"]["class"] == "C1,1"
        code, _, _ = run_cli("wsat", instance("three_cnf.prop"), 0)
        assert code == EXIT_NO


class TestReductions:
    def test_clique_to_model_checking(self, run_cli, instance):
        code, report, _ = run_cli("reduce", "clique2mc", instance("K3.struct"), "-k", 3)
        assert code == EXIT_YES
        assert report["result"]["check"] == {"source": True, "target": True, "agree": True}
        assert report["outputs"]["sentence"].startswith("EX")

    def test_model_checking_to_clique(self, run_cli, instance):
        code, report, _ = run_cli("reduce", "mc2clique", instance("P3.struct"), instance("triangle.fo"))
        assert code == EXIT_YES
        assert report["result"]["check"]["agree"] is True
        assert report["result"]["k"] == 3

    def test_wsat_to_fagin(self, run_cli, instance):
        code, report, _ = run_cli("reduce", "wsat2fagin", instance("three_cnf.prop"), "-k", 1)
        assert code == EXIT_YES
        assert report["result"]["elements"] == 7
        assert set(report["outputs"]) == {"normalized", "structure", "sentence"}
        assert report["outputs"]["sentence"].startswith("# setvar X 1\n")

    def test_machine(self, run_cli, instance):
        code, report, _ = run_cli("reduce", "atm", instance("acceptor.atm"), "-k", 2)
        assert code == EXIT_YES
        assert report["result"]["check"] == {"source": True, "target": True, "agree": True}

    def test_outputs_to_files(self, run_cli, instance, tmp_path):
        prefix = tmp_path / "out"
        code, report, _ = run_cli("reduce", "hom2emb", instance("K2.struct"), instance("P3.struct"),
                                  "--out", prefix)
        assert code == EXIT_YES
        path = report["outputs"]["structure"]
        assert path == f"{prefix}.structure.struct"
        assert "universe 6" in open(path).read()

    def test_missing_parameter(self, run_cli, instance):
        code, _, err = run_cli("reduce", "clique2mc", instance("K3.struct"))
        assert code == EXIT_USAGE
        assert "-k" in err


class TestStructuresAndDecompositions:
    def test_gen(self, run_cli):
        code, report, _ = run_cli("gen", "K4")
        assert code == EXIT_YES
        assert report["answer"] is None
        assert report["result"]["tuples"] == 12
        assert "universe 4" in report["outputs"]["structure"]

    @pytest.mark.parametrize("kind", ["random-graph", "random_graph"])
    def test_gen_random_graph(self, run_cli, kind):
        code, report, _ = run_cli("--seed", 3, "gen", kind, "--n", 5)
        assert code == EXIT_YES
        assert report["algorithm"] == "gen/random-graph"
        assert "universe 5" in report["outputs"]["structure"]

    def test_gen_unknown(self, run_cli):
        code, _, _ = run_cli("gen", "Q9")
        assert code == EXIT_USAGE

    def test_td(self, run_cli, instance):
        code, report, _ = run_cli("td", instance("C5.struct"))
        assert code == EXIT_YES
        assert report["result"]["width"] == 2
        code, report, _ = run_cli("td", instance("C5.struct"), "--exact", "--nice")
        assert report["result"]["width"] == 2
        assert report["result"]["nice_nodes"] > report["result"]["bags"]

    def test_classify(self, run_cli, instance):
        code, report, _ = run_cli("classify", instance("vc.fo"))
        assert code == EXIT_YES
        assert report["result"]["prenex_fragment"] == "Pi1"
        assert report["result"]["relation_variable"] == ["X", 1]

    @pytest.mark.parametrize("suite", ["treewidth", "encodings", "atm", "wsat"])
    def test_verify(self, run_cli, suite):
        code, report, err = run_cli("verify", suite, "--quick")
        assert code == EXIT_YES
        assert report["result"][suite]["failed"] == 0
        assert report["result"][suite]["passed"] > 0
        assert suite in err


class TestUsage:
    def test_missing_file(self, run_cli, instance):
        code, report, err = run_cli("eval", "no-such.struct", instance("triangle.fo"))
        assert code == EXIT_USAGE
        assert report is None
        assert "Cannot access file" in err

    def test_bad_arguments(self, run_cli):
        code, _, _ = run_cli("eval", "only-one")
        assert code == EXIT_USAGE

    def test_run_is_logged_to_the_file(self, run_cli, instance, tmp_path):
        run_cli("--seed", 4, "eval", instance("K3.struct"), instance("triangle.fo"))
        text = (tmp_path / "fptmc.log").read_text(encoding="utf-8")
        assert "Starting fptmc eval (seed 4, hashing deterministic" in text
        assert "Finished fptmc eval" in text

    def test_no_command(self, run_cli):
        code, report, _ = run_cli()
        assert code == EXIT_USAGE
        assert report is None


class TestReports:
    def test_repeated_runs_are_identical(self, run_cli, instance):
        argv = ("--seed", 7, "emb", instance("C5.struct"), instance("P3.struct"), "--hash-mode", "randomized")
        _, first, _ = run_cli(*argv)
        _, second, _ = run_cli(*argv)
        assert json.dumps(first) == json.dumps(second)
        assert first["seed"] == 7

    def test_seed_from_environment(self, run_cli, instance, monkeypatch):
        monkeypatch.setenv("FPTMC_SEED", "11")
        _, report, _ = run_cli("eval", instance("K3.struct"), instance("triangle.fo"))
        assert report["seed"] == 11

    def test_key_order_and_timings(self, run_cli, instance):
        _, report, _ = run_cli("eval", instance("K3.struct"), instance("triangle.fo"))
        assert list(report) == ["command", "algorithm", "seed", "answer", "result"]
        _, report, _ = run_cli("--timings", "eval", instance("K3.struct"), instance("triangle.fo"))
        assert list(report)[-1] == "timings"
        assert "evaluate" in report["timings"]

    def test_report_json(self):
        report = RunReport(["x"], algorithm="brute", answer=False, result={"set": frozenset({(1, 2)})})
        data = json.loads(report.to_json())
        assert data["result"] == {"set": [[1, 2]]}
        assert report.exit_code == EXIT_NO

    def test_display(self):
        stream = io.StringIO()
        display = Display(color_output=False, stream=stream)
        display.answer(RunReport([], algorithm="hom", answer=True, result={"width": 2},
                                 outputs={"graph": "a\nb\n"}))
        display.error("broken")
        text = stream.getvalue()
        assert "YES via hom" in text
        assert "width: 2" in text
        assert "graph: inline in the report" in text
        assert "Error: broken" in text


class TestConfig:
    def test_missing_file_gives_defaults(self, tmp_path):
        assert load_config(str(tmp_path / "absent.json")) == create_default_config()

    def test_partial_file_is_merged(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"hashing": {"mode": "randomized"}}))
        config = load_config(str(path))
        assert config["hashing"] == {"mode": "randomized", "epsilon": 1e-6}
        assert config["guards"] == create_default_config()["guards"]

    def test_save_and_load(self, tmp_path):
        config = merge_config(create_default_config(), {"guards": {"max_candidates": 9}})
        path = str(tmp_path / "saved.json")
        save_config(config, path)
        assert load_config(path) == config

    @pytest.mark.parametrize("cli,env,expected", [
        (3, {"FPTMC_SEED": "5"}, 3),
        (None, {"FPTMC_SEED": "5"}, 5),
        (None, {}, 0),
        (None, {"FPTMC_SEED": "five"}, 0),
    ])
    def test_resolve_seed(self, cli, env, expected):
        assert resolve_seed(cli, env) == expected
