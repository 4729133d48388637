"""CLI surface: file flows, exit codes, and output determinism."""

import json
import subprocess
import sys

import pytest

from faultchain.cli import main
from faultchain.corpus import golden_expected, motivating_example, write_case


@pytest.fixture(scope="module")
def golden_files(tmp_path_factory):
    """Golden program + tests on disk, plus traced artifacts."""
    root = tmp_path_factory.mktemp("goldenfiles")
    case = motivating_example()
    (root / "program.src").write_text(case.source, encoding="utf-8")
    (root / "tests.json").write_text(
        json.dumps(case.bundle.tests, indent=2), encoding="utf-8")
    out = root / "traced"
    rc = main(["trace", str(root / "program.src"), str(root / "tests.json"),
               "-o", str(out)])
    assert rc == 0
    return root


class TestTrace:
    def test_artifacts_exist(self, golden_files):
        out = golden_files / "traced"
        for name in ("coverage_spectrum.json", "slice_spectrum.json",
                     "pdg.json", "verdicts.json"):
            assert (out / name).exists()
        verdicts = json.loads((out / "verdicts.json").read_text())
        assert verdicts["failing"] == 6 and verdicts["passing"] == 6

    def test_missing_tests_file_exits_2(self, golden_files, capsys):
        rc = main(["trace", str(golden_files / "program.src"),
                   str(golden_files / "nope.json"), "-o", "x"])
        assert rc == 2
        assert "nope.json" in capsys.readouterr().err

    def test_program_without_output_exits_2(self, tmp_path):
        (tmp_path / "p.src").write_text("read(x);\ny = x;\n")
        (tmp_path / "t.json").write_text(
            '[{"id": "t1", "inputs": {"x": 1}, "expected": 1}]')
        rc = main(["trace", str(tmp_path / "p.src"), str(tmp_path / "t.json"),
                   "-o", str(tmp_path / "out")])
        assert rc == 2

    def test_ddg_export(self, golden_files, tmp_path):
        out = tmp_path / "with-ddg"
        rc = main(["trace", str(golden_files / "program.src"),
                   str(golden_files / "tests.json"), "-o", str(out),
                   "--export-ddg"])
        assert rc == 0
        ddg = json.loads((out / "ddg" / "t1.json").read_text())
        assert {"statement": "S9", "occurrence": 0} in ddg["nodes"]
        assert all(e["type"] in ("data", "control") for e in ddg["edges"])


class TestLocalize:
    def test_full_pipeline_report(self, golden_files, tmp_path):
        out = tmp_path / "report.json"
        traced = golden_files / "traced"
        rc = main(["localize", str(traced / "coverage_spectrum.json"),
                   str(traced / "pdg.json"),
                   "--causal-spectrum", str(traced / "slice_spectrum.json"),
                   "-o", str(out)])
        assert rc == 0
        report = json.loads(out.read_text())
        top3 = [e["statement"] for e in report["ranking"][:3]]
        assert top3 == ["S9", "S15", "S6"]
        assert report["chains"][0]["members"] == ["S9", "S15"]
        assert report["config"]["technique"] == "inference"

    def test_baseline_technique_has_no_chains(self, golden_files, tmp_path):
        out = tmp_path / "ochiai.json"
        traced = golden_files / "traced"
        rc = main(["localize", str(traced / "coverage_spectrum.json"),
                   str(traced / "pdg.json"), "--technique", "ochiai",
                   "-o", str(out)])
        assert rc == 0
        report = json.loads(out.read_text())
        assert report["chains"] == []
        assert report["ranking"][0]["statement"] == "S6"

    def test_delta_fraction_one_selects_all_candidates(self, golden_files,
                                                       tmp_path):
        out = tmp_path / "all.json"
        traced = golden_files / "traced"
        rc = main(["localize", str(traced / "coverage_spectrum.json"),
                   str(traced / "pdg.json"), "--delta-fraction", "1.0",
                   "-o", str(out)])
        assert rc == 0
        report = json.loads(out.read_text())
        tier1 = [e for e in report["ranking"] if e["tier"] == 1]
        assert len(tier1) == 5

    def test_no_failing_tests_exits_3(self, tmp_path):
        from faultchain.pipeline import trace_case
        from faultchain.spectrum import save_spectrum
        case = motivating_example()
        tr = trace_case(case.bundle.variant_source([]), case.make_suite())
        save_spectrum(tr.coverage, tmp_path / "clean.json")
        tr.pdg.save(tmp_path / "pdg.json")
        rc = main(["localize", str(tmp_path / "clean.json"),
                   str(tmp_path / "pdg.json")])
        assert rc == 3

    def test_prior_file(self, golden_files, tmp_path):
        traced = golden_files / "traced"
        priors = tmp_path / "priors.json"
        priors.write_text('{"S13": 4.0}')
        out = tmp_path / "prior-report.json"
        rc = main(["localize", str(traced / "coverage_spectrum.json"),
                   str(traced / "pdg.json"), "--prior-file", str(priors),
                   "-o", str(out)])
        assert rc == 0


def _run_cli(args, cwd):
    return subprocess.run([sys.executable, "-m", "faultchain.cli", *args],
                          capture_output=True, text=True, cwd=cwd)


@pytest.fixture(scope="module")
def mini_corpus(tmp_path_factory):
    """Golden case only; enough surface for the determinism checks."""
    root = tmp_path_factory.mktemp("minicorpus")
    case = motivating_example()
    write_case(root / case.name, case.bundle, golden_expected())
    return root


class TestEvaluate:
    def test_golden_corpus_row_matches_expectations(self, mini_corpus,
                                                    tmp_path, capsys):
        out = tmp_path / "results.json"
        rc = main(["evaluate", str(mini_corpus), "-o", str(out)])
        assert rc == 0
        results = json.loads(out.read_text())
        case = results["cases"][0]
        assert all(c["ok"] for c in case["expectation_checks"])
        text = capsys.readouterr().out
        assert "Average statements examined" in text
        assert "expected-value checks" in text

    def test_malformed_case_skipped_with_warning(self, mini_corpus, tmp_path,
                                                 capsys):
        import shutil
        corpus = tmp_path / "corpus"
        shutil.copytree(mini_corpus, corpus)
        bad = corpus / "broken"
        bad.mkdir()
        (bad / "program.src").write_text("read(x);\nreturn x;\n")
        rc = main(["evaluate", str(corpus), "-o", str(tmp_path / "r.json")])
        assert rc == 0
        assert "broken" in capsys.readouterr().err

    def test_unknown_technique_exits_2(self, mini_corpus):
        rc = main(["evaluate", str(mini_corpus), "--techniques", "psychic"])
        assert rc == 2

    def test_out_of_range_config_exits_2(self, mini_corpus, capsys):
        assert main(["evaluate", str(mini_corpus),
                     "--delta-fraction", "0"]) == 2
        assert main(["evaluate", str(mini_corpus), "--ridge", "-1"]) == 2
        capsys.readouterr()


class TestDeterminism:
    def test_localize_byte_identical_across_processes(self, golden_files,
                                                      tmp_path):
        traced = golden_files / "traced"
        outputs = []
        for i in (1, 2):
            out = tmp_path / f"report{i}.json"
            result = _run_cli(
                ["localize", str(traced / "coverage_spectrum.json"),
                 str(traced / "pdg.json"),
                 "--causal-spectrum", str(traced / "slice_spectrum.json"),
                 "-o", str(out)], cwd=tmp_path)
            assert result.returncode == 0, result.stderr
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]

    def test_evaluate_byte_identical_across_processes(self, mini_corpus,
                                                      tmp_path):
        payloads = []
        stdouts = []
        for i in (1, 2):
            out = tmp_path / f"eval{i}.json"
            result = _run_cli(["evaluate", str(mini_corpus), "-o", str(out)],
                              cwd=tmp_path)
            assert result.returncode == 0, result.stderr
            payloads.append(out.read_bytes())
            stdouts.append(result.stdout)
        assert payloads[0] == payloads[1]
        assert stdouts[0] == stdouts[1]


class TestCorpusGen:
    def test_small_corpus_generates_and_evaluates(self, tmp_path, capsys):
        corpus = tmp_path / "corpus"
        rc = main(["corpus-gen", str(corpus), "--programs", "2",
                   "--tests-min", "30", "--tests-max", "40", "--seed", "5"])
        assert rc == 0
        dirs = sorted(p.name for p in corpus.iterdir() if p.is_dir())
        assert "golden-calculator" in dirs
        assert len(dirs) == 3
        for d in dirs:
            for f in ("program.src", "tests.json", "faults.json",
                      "expected.json"):
                assert (corpus / d / f).exists()
        rc = main(["evaluate", str(corpus), "--techniques", "inference,o",
                   "-o", str(tmp_path / "r.json")])
        assert rc == 0
