import json
from pathlib import Path

import pytest

from qcheck.cli.commands import main
from qcheck.cli.report import CheckReport, format_report
from qcheck.algebra.exactalg import poly_from_json
from qcheck.cli.suite import (
    EXIT_FAIL,
    EXIT_OK,
    EXIT_USAGE,
    SuiteConfig,
    expand_tasks,
    resolve_selection,
    run_suite,
    suite_config_from_json,
)
from qcheck.core.errors import UsageError
from qcheck.services import wzengine


@pytest.fixture
def suite_config(tmp_path):
    def make(**kw):
        kw.setdefault("parallelism", 1)
        return SuiteConfig(witness_dir=str(tmp_path / "witnesses"), **kw)

    return make


@pytest.fixture
def witness_env(tmp_path, monkeypatch):
    # main() builds its own SuiteConfig, so point the default witness dir at tmp
    monkeypatch.setattr("qcheck.cli.suite.Config.WITNESS_DIR", str(tmp_path / "witnesses"))
    return tmp_path / "witnesses"


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def test_format_report_empty():
    assert format_report([], "json_lines") == ""


def test_format_report_single_pass():
    out = format_report([CheckReport("lemma.fermat", {"n": 3}, True, "ab" * 32, 4)], "json_lines")
    assert out.count("\n") == 1
    assert '"pass":true' in out
    assert json.loads(out) == {
        "check_id": "lemma.fermat",
        "params": {"n": 3},
        "pass": True,
        "witness_digest": "ab" * 32,
        "elapsed_ms": 4,
        "detail_path": None,
    }


def test_format_report_text_table_golden():
    reports = [
        CheckReport("theorem.qdiv", {"n": 3}, True, "a" * 64, 12),
        CheckReport("theorem.qdiv", {"n": 5}, False, "b" * 64, 7, "/tmp/w.json"),
    ]
    expected = (
        "STATUS  CHECK         PARAMS  MS  DIGEST\n"
        "ok      theorem.qdiv  n=3     12  aaaaaaaaaaaaaaaa\n"
        "FAIL    theorem.qdiv  n=5     7   bbbbbbbbbbbbbbbb\n"
        "2 checks: 1 passed, 1 failed\n"
        "witness for theorem.qdiv n=5: /tmp/w.json\n"
    )
    assert format_report(reports, "text_table") == expected


def test_format_report_unknown_format():
    with pytest.raises(ValueError):
        format_report([], "yaml")


# ---------------------------------------------------------------------------
# Suite configuration
# ---------------------------------------------------------------------------


def test_resolve_selection():
    assert resolve_selection(["theorem.qdiv"]) == ["theorem.qdiv"]
    assert resolve_selection(["combination"]) == ["combination.k1", "combination.kneg1"]
    # registry order, not selection order
    assert resolve_selection(["theorem.qdiv", "lemma.fermat"]) == ["lemma.fermat", "theorem.qdiv"]
    assert "conjecture.laurent" in resolve_selection("all")
    with pytest.raises(UsageError):
        resolve_selection(["theorem.thm_9_9"])
    with pytest.raises(UsageError):
        resolve_selection(["nope"])


def test_default_expansion_matches_acceptance_ranges(suite_config):
    tasks = expand_tasks(suite_config(selected_checks=["wz", "telescope.step", "theorem.thm_1_1"]))
    by_id = {}
    for task in tasks:
        by_id.setdefault(task.check_id, []).append(task.param_dict)
    assert len(by_id["wz.pair"]) == 77
    assert len(by_id["telescope.step"]) == 40
    assert [p["n"] for p in by_id["theorem.thm_1_1"]] == [3, 5, 7, 9, 15]


def test_bounds_enforced_unless_extended(suite_config):
    with pytest.raises(UsageError):
        expand_tasks(suite_config(selected_checks=["wz"], n_max=20))
    tasks = expand_tasks(suite_config(selected_checks=["wz"], n_max=20, unsafe_extended=True))
    assert len(tasks) == 21 * 7


def test_prime_power_bound(suite_config):
    with pytest.raises(UsageError):
        expand_tasks(suite_config(selected_checks=["super.wang_pr"], prime_powers=[(11, 3)]))


def test_suite_config_from_json():
    config = suite_config_from_json('{"selected_checks": ["lemma"], "k_range": [-1, 1], "fail_fast": true}')
    assert config.selected_checks == ["lemma"]
    assert config.k_range == (-1, 1)
    assert config.fail_fast
    assert suite_config_from_json("").selected_checks == "all"


@pytest.mark.parametrize(
    "raw",
    ["{not json", "[1, 2]", '{"colour": "red"}', '{"output_format": "xml"}', '{"k_range": [2, 1]}'],
)
def test_suite_config_from_json_rejects(raw):
    with pytest.raises(UsageError):
        suite_config_from_json(raw)


# ---------------------------------------------------------------------------
# run_suite
# ---------------------------------------------------------------------------


def test_run_suite_passes(suite_config):
    reports, code = run_suite(suite_config(selected_checks=["lemma.fermat", "wz"], n_list=[3, 5], n_max=1))
    assert code == EXIT_OK
    assert [r.check_id for r in reports] == ["lemma.fermat"] * 2 + ["wz.pair"] * 14
    assert all(r.passed and r.detail_path is None for r in reports)
    assert all(len(r.witness_digest) == 64 for r in reports)


def test_run_suite_rejects_even_n_before_running(suite_config):
    reports, code = run_suite(suite_config(selected_checks=["theorem.thm_1_1"], n_list=[4]))
    assert code == EXIT_USAGE
    assert reports == []


def test_run_suite_unknown_check(suite_config):
    assert run_suite(suite_config(selected_checks=["bogus.check"])) == ([], EXIT_USAGE)


def test_run_suite_fault_injection(suite_config, monkeypatch, tmp_path):
    original = wzengine.theorem_rhs
    monkeypatch.setattr(wzengine, "theorem_rhs", lambda theorem_id, n: original(theorem_id, n) + 1)

    reports, code = run_suite(suite_config(selected_checks=["theorem.qdiv"], n_list=[3, 5], fail_fast=True))
    assert code == EXIT_FAIL
    assert len(reports) == 1
    report = reports[0]
    assert not report.passed
    detail = json.loads(Path(report.detail_path).read_text())
    assert detail["check_id"] == "theorem.qdiv"
    assert detail["witness"]["pass"] is False
    assert detail["witness"]["witness"]["coeffs"]
    assert not poly_from_json(detail["witness"]["witness"]).is_zero
    assert Path(report.detail_path).parent == tmp_path / "witnesses"


def test_run_suite_exception_becomes_failure(suite_config, monkeypatch):
    def broken(theorem_id, n):
        raise ZeroDivisionError("boom")

    monkeypatch.setattr(wzengine, "theorem_rhs", broken)
    reports, code = run_suite(suite_config(selected_checks=["theorem.qdiv"], n_list=[3]))
    assert code == EXIT_FAIL
    assert not reports[0].passed
    assert reports[0].detail_path


def test_run_suite_deterministic(suite_config):
    config = suite_config(selected_checks=["lemma", "divisibility"], n_list=[3, 5], n_max=6)

    def strip_elapsed(reports):
        return [{**r.to_dict(), "elapsed_ms": 0} for r in reports]

    first, _ = run_suite(config)
    second, _ = run_suite(config)
    assert strip_elapsed(first) == strip_elapsed(second)


def test_run_suite_parallel_matches_sequential(suite_config):
    sequential, code = run_suite(suite_config(selected_checks=["lemma.mod_n"], n_list=[3, 5, 7]))
    parallel, parallel_code = run_suite(
        suite_config(selected_checks=["lemma.mod_n"], n_list=[3, 5, 7], parallelism=2)
    )
    assert code == parallel_code == EXIT_OK
    assert [r.witness_digest for r in sequential] == [r.witness_digest for r in parallel]


# ---------------------------------------------------------------------------
# Command line
# ---------------------------------------------------------------------------


def test_main_cyclotomic(capsys):
    assert main(["cyclotomic", "--n", "6"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out == {"n": 6, "poly": {"offset": 0, "coeffs": ["1/1", "-1/1", "1/1"]}}


def test_main_qbinom(capsys):
    assert main(["qbinom", "--n", "4", "--k", "2"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["poly"]["coeffs"] == ["1/1", "1/1", "2/1", "1/1", "1/1"]


def test_main_verify_lemma(capsys, witness_env):
    code = main(["verify", "lemma", "--id", "fermat", "--n-list", "3", "5", "--parallelism", "1"])
    assert code == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2
    assert all(json.loads(line)["pass"] for line in lines)


def test_main_even_n_is_usage_error(capsys, witness_env):
    assert main(["verify", "theorem", "--id", "thm_1_1", "--n-list", "4", "--parallelism", "1"]) == EXIT_USAGE
    assert capsys.readouterr().out == ""


def test_main_check_super_text_table(capsys, witness_env):
    code = main(["check", "super", "--id", "wang", "--p", "5", "--format", "text_table", "--parallelism", "1"])
    assert code == EXIT_OK
    assert "1 checks: 1 passed, 0 failed" in capsys.readouterr().out


def test_main_r_requires_prime_power_variant(witness_env):
    assert main(["check", "super", "--id", "wang", "--p", "5", "--r", "2"]) == EXIT_USAGE


def test_main_suite_config_file(tmp_path, capsys, witness_env):
    path = tmp_path / "suite.json"
    path.write_text(json.dumps({"selected_checks": ["divisibility.sunby"], "n_max": 4, "parallelism": 1}))
    assert main(["suite", "--config", str(path)]) == EXIT_OK
    assert len(capsys.readouterr().out.splitlines()) == 3


def test_main_suite_bad_config(tmp_path, witness_env):
    path = tmp_path / "suite.json"
    path.write_text("{oops")
    assert main(["suite", "--config", str(path)]) == EXIT_USAGE
    assert main(["suite", "--config", str(tmp_path / "missing.json")]) == EXIT_USAGE


def test_main_argparse_error():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "theorem", "--id", "thm_9_9"])
    assert exc.value.code == 2


def test_main_n_list_accepts_commas(capsys, witness_env):
    code = main(["verify", "lemma", "--id", "fermat", "--n-list", "3,5,7", "--parallelism", "1"])
    assert code == EXIT_OK
    params = [json.loads(line)["params"] for line in capsys.readouterr().out.splitlines()]
    assert params == [{"n": 3}, {"n": 5}, {"n": 7}]


def test_main_m_list_mixed_separators(capsys, witness_env):
    code = main(["verify", "vanishing", "--m-list", "3,5", "7", "--parallelism", "1"])
    assert code == EXIT_OK
    assert [json.loads(line)["params"]["m"] for line in capsys.readouterr().out.splitlines()] == [3, 5, 7]


def test_main_n_list_rejects_garbage():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "lemma", "--n-list", "3,x"])
    assert exc.value.code == 2


def test_main_prime_power_primes_without_r(capsys, witness_env):
    code = main(["check", "super", "--id", "guo1_pr", "--p", "7", "--parallelism", "1"])
    assert code == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert [json.loads(line)["params"] for line in lines] == [{"p": 7, "r": 2}]


def test_main_prime_power_with_r(capsys, witness_env):
    code = main(["check", "super", "--id", "wang_pr", "--p", "5", "--r", "3", "--parallelism", "1"])
    assert code == EXIT_OK
    assert json.loads(capsys.readouterr().out)["params"] == {"p": 5, "r": 3}


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "divisibility", "--id", "sunby", "--n-max", "1"],
        ["verify", "telescope", "--m-max", "0"],
        ["check", "conjecture", "--n-max", "0"],
        ["verify", "wz", "--n-max", "-1"],
    ],
)
def test_main_ranges_below_floor(argv, capsys, witness_env):
    assert main([*argv, "--parallelism", "1"]) == EXIT_USAGE
    assert capsys.readouterr().out == ""


def test_run_suite_empty_expansion(suite_config):
    assert run_suite(suite_config(selected_checks=["lemma.fermat"], n_list=[])) == ([], EXIT_USAGE)
    assert run_suite(suite_config(selected_checks=["telescope.span"], k_range=(1, 1))) == ([], EXIT_USAGE)


def test_run_suite_zero_overrides_are_not_defaults(suite_config):
    tasks = expand_tasks(suite_config(selected_checks=["bridge.wz_F0"], n_max=0))
    assert [t.param_dict for t in tasks] == [{"k": 0}]


def test_main_malformed_parallelism_env(monkeypatch, capsys, witness_env):
    monkeypatch.setenv("QC_PARALLELISM", "four")
    assert main(["verify", "lemma", "--id", "fermat", "--n-list", "3"]) == EXIT_USAGE
    assert "QC_PARALLELISM" in capsys.readouterr().err


def test_main_parallelism_env_used(monkeypatch, capsys, witness_env):
    monkeypatch.setenv("QC_PARALLELISM", "1")
    assert main(["verify", "lemma", "--id", "fermat", "--n-list", "3"]) == EXIT_OK


@pytest.mark.slow
def test_run_suite_all_defaults(tmp_path):
    reports, code = run_suite(SuiteConfig(witness_dir=str(tmp_path / "witnesses")))
    assert code == EXIT_OK
    assert all(r.passed for r in reports)
    assert {r.check_id for r in reports} == set(resolve_selection("all"))
