"""
実行設定・レポート・検証スイートの枠組みのテスト
"""
import argparse
import json

import pytest
from mpmath import mp

from automation.config_manager import RunConfig, RunConfigManager
from automation.reports import ReportGenerator
from automation.suites import SUITE_NAMES, VerificationSuite, _suite_worker, run_check, sample_taus
from utils.error_handler import ConfigurationError, DomainError, ValidationError


def _namespace(**overrides):
    values = {"precision": None, "order": None, "tol": None, "format": None, "seed": None, "suite": None}
    values.update(overrides)
    return argparse.Namespace(**values)


@pytest.fixture
def manager(tmp_path):
    return RunConfigManager(config_file=tmp_path / "run_config.json")


# =============================================================================
# RunConfig
# =============================================================================

def test_run_config_accepts_explicit_values():
    run_config = RunConfig(precision_bits=128, truncation_order=40, output="json", sample_count=3).validate()
    assert run_config.to_dict()["precision_bits"] == 128
    assert run_config.suites == ["all"]


@pytest.mark.parametrize(
    "overrides",
    [
        {"precision_bits": 32},
        {"truncation_order": 4},
        {"residual_tol": -1.0},
        {"output": "xml"},
        {"sample_count": 0},
        {"workers": 0},
    ],
)
def test_run_config_rejects_invalid_values(overrides):
    values = {"precision_bits": 128, "truncation_order": 40, "output": "text", "sample_count": 3}
    values.update(overrides)
    with pytest.raises(ConfigurationError):
        RunConfig(**values).validate()


def test_run_config_round_trips_through_dict():
    run_config = RunConfig(precision_bits=128, truncation_order=16, sample_count=2, workers=3).validate()
    assert RunConfig(**run_config.to_dict()).to_dict() == run_config.to_dict()
    assert run_config.workers == 3


def test_run_config_tolerance_defaults_to_half_precision():
    tolerance = RunConfig(precision_bits=128, digit_tol=30).tolerance
    assert tolerance.residual_tol == mp.ldexp(1, -64)


# =============================================================================
# RunConfigManager
# =============================================================================

def test_manager_defaults_and_anchors(manager):
    assert manager.get_defaults()["suites"] == ["all"]
    assert manager.resolve_tau("cm") == "sqrt2*i"
    assert manager.resolve_tau("square") == "i"
    assert manager.resolve_tau("1/2+i") == "1/2+i"


def test_manager_persists_changes(tmp_path):
    path = tmp_path / "run_config.json"
    first = RunConfigManager(config_file=path)
    first.add_anchor_tau("rotated", "exp(2*pi*i/3)")
    first.set_default("seed", 7)

    saved = json.loads(path.read_text(encoding="utf-8"))
    assert saved["anchor_taus"]["rotated"] == "exp(2*pi*i/3)"

    second = RunConfigManager(config_file=path)
    assert second.resolve_tau("rotated") == "exp(2*pi*i/3)"
    assert second.build_run_config().seed == 7


def test_manager_ignores_broken_file(tmp_path):
    path = tmp_path / "run_config.json"
    path.write_text("{not json", encoding="utf-8")
    manager = RunConfigManager(config_file=path)
    assert manager.resolve_tau("deep") == "2i"


def test_build_run_config_applies_arguments(manager):
    run_config = manager.build_run_config(_namespace(precision=128, order=16, format="json", seed=5, suite="forms"))
    assert run_config.precision_bits == 128
    assert run_config.truncation_order == 16
    assert run_config.output == "json"
    assert run_config.seed == 5
    assert run_config.suites == ["forms"]


def test_build_run_config_validates_arguments(manager):
    with pytest.raises(ConfigurationError):
        manager.build_run_config(_namespace(precision=32))


# =============================================================================
# ReportGenerator
# =============================================================================

def _report():
    return {
        "suite": "demo",
        "checks": [
            {"id": "a[0]", "anchor": "state.x", "status": "pass", "expected": None, "computed": None,
             "residual": "1e-40", "ms": 1.5},
            {"id": "a[1]", "anchor": "state.x", "status": "skip", "expected": None, "computed": None,
             "residual": None, "ms": 0.5, "detail": "分岐値の近傍です。"},
            {"id": "b", "anchor": "charts.solve", "status": "fail", "expected": "[1, 2]", "computed": "[1, 3]",
             "residual": None, "ms": 2.0},
        ],
    }


def test_report_summary(tmp_path):
    generator = ReportGenerator(_report(), report_dir=tmp_path)
    assert generator.summary() == {"total": 3, "pass": 1, "fail": 1, "skip": 1, "ms": 4.0}
    assert not generator.passed
    assert list(generator.failures()["id"]) == ["b"]

    table = generator.by_anchor()
    assert table.loc["state.x", "pass"] == 1
    assert table.loc["state.x", "skip"] == 1
    assert table.loc["charts.solve", "fail"] == 1


def test_report_text_lists_failures(tmp_path):
    text = ReportGenerator(_report(), report_dir=tmp_path).to_text()
    assert "スイート: demo" in text
    assert "失敗したチェック:" in text
    assert "charts.solve" in text


def test_empty_report_passes(tmp_path):
    generator = ReportGenerator({"suite": "empty", "checks": []}, report_dir=tmp_path)
    assert generator.summary()["total"] == 0
    assert generator.passed
    assert generator.by_anchor().empty


def test_report_csv(tmp_path):
    path = ReportGenerator(_report(), report_dir=tmp_path / "reports").save_csv()
    assert path.exists()
    assert path.name.startswith("demo_")
    assert path.read_text(encoding="utf-8").splitlines()[0].startswith("id,anchor,status")


# =============================================================================
# スイート
# =============================================================================

def test_sample_taus_are_seeded():
    first = sample_taus(11, 5)
    assert first == sample_taus(11, 5)
    assert first != sample_taus(12, 5)
    for tau in first:
        assert abs(mp.re(tau)) <= 2
        assert 0.5 <= mp.im(tau) <= 4


def test_run_check_passes_small_residual():
    record = run_check("ok", "demo.op", lambda: {"computed": 1, "expected": 1, "residual": mp.mpf("1e-40")}, 1e-30)
    assert record["status"] == "pass"
    assert record["anchor"] == "demo.op"


def test_run_check_fails_large_residual():
    record = run_check("big", "demo.op", lambda: {"computed": 1, "expected": 2, "residual": mp.mpf(1)}, 1e-30)
    assert record["status"] == "fail"


def test_run_check_exact_comparison():
    record = run_check("exact", "demo.op", lambda: {"computed": [1, 2], "expected": [1, 2], "exact": True}, 1e-30)
    assert record["status"] == "pass"
    assert record["residual"] is None


def test_run_check_skips_domain_errors():
    def body():
        raise DomainError("近すぎます", error_code="branch_value", guard="|τ − τⱼ| ≥ 1e-3")

    record = run_check("guarded", "demo.op", body, 1e-30)
    assert record["status"] == "skip"
    assert "分岐値" in record["detail"]


def test_run_check_fails_on_other_errors():
    def body():
        raise ZeroDivisionError("division by zero")

    record = run_check("broken", "demo.op", body, 1e-30)
    assert record["status"] == "fail"
    assert "division" in record["detail"]


def test_suite_names():
    assert VerificationSuite.suite_names("all") == SUITE_NAMES
    assert VerificationSuite.suite_names("forms") == ("forms",)
    with pytest.raises(ValidationError):
        VerificationSuite.suite_names("nope")


@pytest.mark.slow
def test_suite_worker_matches_in_process_run():
    run_config = RunConfig(precision_bits=128, truncation_order=16, sample_count=1).validate()
    in_process = VerificationSuite(run_config).run("whittaker")["checks"]
    from_worker = _suite_worker((run_config.to_dict(), "whittaker"))
    assert [c["id"] for c in from_worker] == [c["id"] for c in in_process]
    assert [c["status"] for c in from_worker] == [c["status"] for c in in_process]


@pytest.mark.slow
def test_parallel_run_keeps_suite_order():
    sequential = RunConfig(precision_bits=128, truncation_order=16, sample_count=1, workers=1).validate()
    parallel = RunConfig(precision_bits=128, truncation_order=16, sample_count=1, workers=3).validate()
    first = VerificationSuite(sequential).run("all")["checks"]
    second = VerificationSuite(parallel).run("all")["checks"]
    assert [c["id"] for c in second] == [c["id"] for c in first]
    assert [c["status"] for c in second] == [c["status"] for c in first]


@pytest.mark.slow
@pytest.mark.parametrize("name", SUITE_NAMES)
def test_every_suite_passes_with_default_settings(name):
    report = VerificationSuite(RunConfig(sample_count=2).validate()).run(name)
    generator = ReportGenerator(report)
    assert generator.summary()["total"] > 0
    assert generator.summary()["fail"] == 0, generator.failures()[["id", "residual"]].to_string()
