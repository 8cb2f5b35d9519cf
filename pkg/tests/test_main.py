"""
コマンドラインのテスト
"""
import json

import pytest

import config
import main
from automation.config_manager import RunConfig, RunConfigManager
from main import EVAL_TARGETS, SERIES_BUILDERS, build_parser, build_series, cmd_config, cmd_eval, cmd_series, cmd_verify
from utils.error_handler import ConfigurationError, ValidationError


def test_parser_reads_common_options():
    args = build_parser().parse_args(["series", "g2", "--order", "17", "--format", "json", "--precision", "128"])
    assert args.command == "series"
    assert args.name == "g2"
    assert args.order == 17
    assert args.format == "json"
    assert args.precision == 128


def test_parser_rejects_unknown_target():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["eval", "nonsense"])


def test_build_series_record():
    record = build_series("g2", 40)
    assert record["name"] == "g2"
    assert record["chart"] == "infinity"
    assert record["step"] == 8
    assert record["coeffs"][:5] == ["1/240", "1", "9", "28", "73"]


def test_build_series_rejects_bad_input():
    with pytest.raises(ValidationError):
        build_series("Z@nowhere", 10)
    with pytest.raises(ValidationError):
        build_series("g2", 0)


def test_every_series_builder_is_named():
    assert {"X@pole", "Y@pole", "X@branch", "mu_of_q", "q_of_mu", "g2"} <= set(SERIES_BUILDERS)


def test_eval_requires_tau():
    with pytest.raises(ValidationError):
        EVAL_TARGETS["x"](None, None)
    with pytest.raises(ValidationError):
        EVAL_TARGETS["wp"](1j, None)


def test_cmd_eval_reports_exact_j(tmp_path, capsys):
    args = build_parser().parse_args(["eval", "J", "--tau", "cm", "--format", "json"])
    manager = RunConfigManager(config_file=tmp_path / "run_config.json")
    run_config = RunConfig(precision_bits=128, truncation_order=40, output="json", sample_count=1).validate()

    assert cmd_eval(args, run_config, manager) == 0
    printed = json.loads(capsys.readouterr().out)
    assert printed["target"] == "J"
    assert printed["exact"] == "125/27"
    assert "4.62962962962962962" in printed["value"]


def test_cmd_series_json(tmp_path, capsys):
    args = build_parser().parse_args(["series", "g2", "--order", "24", "--format", "json"])
    manager = RunConfigManager(config_file=tmp_path / "run_config.json")
    run_config = manager.build_run_config(args)

    assert cmd_series(args, run_config, manager) == 0
    printed = json.loads(capsys.readouterr().out)
    assert printed["coeffs"][:3] == ["1/240", "1", "9"]


@pytest.fixture
def manager(tmp_path):
    return RunConfigManager(config_file=tmp_path / "run_config.json")


def test_series_order_is_independent_of_truncation_order(manager, capsys):
    args = build_parser().parse_args(["series", "X@pole", "--order", "4", "--format", "json"])
    run_config = manager.build_run_config(args)
    assert run_config.truncation_order == config.TRUNCATION_ORDER

    assert cmd_series(args, run_config, manager) == 0
    printed = json.loads(capsys.readouterr().out)
    assert printed["name"] == "X@pole"
    assert printed["coeffs"] == ["1"]


def test_verify_order_still_sets_truncation_order(manager):
    args = build_parser().parse_args(["verify", "--suite", "forms", "--order", "16", "--workers", "2"])
    run_config = manager.build_run_config(args)
    assert run_config.truncation_order == 16
    assert run_config.workers == 2


def test_cmd_series_writes_file(manager, tmp_path, capsys):
    out = tmp_path / "series" / "g2.json"
    args = build_parser().parse_args(["series", "g2", "--order", "24", "--out", str(out)])
    run_config = manager.build_run_config(args)

    assert cmd_series(args, run_config, manager) == 0
    saved = json.loads(out.read_text(encoding="utf-8"))
    assert saved["chart"] == "infinity"
    assert saved["coeffs"][:3] == ["1/240", "1", "9"]
    assert str(out) in capsys.readouterr().out


def test_cmd_config_updates_defaults_and_anchors(manager, capsys):
    args = build_parser().parse_args([
        "config", "--set", "seed=7", "--set", "suites=forms,cover", "--anchor", "near_two=2+i/4", "--format", "json",
    ])
    run_config = manager.build_run_config(args)

    assert cmd_config(args, run_config, manager) == 0
    printed = json.loads(capsys.readouterr().out)
    assert printed["defaults"]["seed"] == 7
    assert printed["defaults"]["suites"] == ["forms", "cover"]
    assert printed["anchor_taus"]["near_two"] == "2+i/4"

    reloaded = RunConfigManager(config_file=manager.config_file)
    assert reloaded.resolve_tau("near_two") == "2+i/4"
    assert reloaded.build_run_config().seed == 7


@pytest.mark.parametrize("argv, error", [
    (["config", "--set", "colour=red"], ValidationError),
    (["config", "--set", "seed"], ValidationError),
    (["config", "--set", "seed=abc"], ValidationError),
    (["config", "--set", "suites=forms,nope"], ValidationError),
    (["config", "--set", "sample_count=0"], ConfigurationError),
    (["config", "--anchor", "below=-i"], ValidationError),
])
def test_cmd_config_rejects_bad_values(manager, argv, error):
    args = build_parser().parse_args(argv)
    run_config = manager.build_run_config(args)
    with pytest.raises(error):
        cmd_config(args, run_config, manager)
    assert not manager.config_file.exists()


def test_cmd_verify_prints_counts_per_operation(manager, monkeypatch, capsys):
    report = {
        "suite": "forms",
        "checks": [
            {"id": "a[0]", "anchor": "burnside-core.theta_forms", "status": "pass", "expected": None,
             "computed": None, "residual": "1e-40", "ms": 1.0},
            {"id": "a[1]", "anchor": "burnside-core.theta_forms", "status": "fail", "expected": "0",
             "computed": "1", "residual": "1", "ms": 1.0},
        ],
    }
    monkeypatch.setattr(main.VerificationSuite, "run", lambda self, suite: report)
    args = build_parser().parse_args(["verify", "--suite", "forms"])
    run_config = manager.build_run_config(args)

    assert cmd_verify(args, run_config, manager) == 1
    out = capsys.readouterr().out
    assert "操作ごとの件数" in out
    assert "burnside-core.theta_forms" in out
