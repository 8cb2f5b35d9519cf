#!/usr/bin/env python3
"""
Burnside Uniformizer - メインスクリプト

y² = x⁵ − x の一意化関数の評価・厳密な級数の出力・検証スイートの実行を行うツール

Usage:
    python main.py eval x --tau 2i                 # x(τ) を評価
    python main.py eval J --tau sqrt2*i            # クラインの J
    python main.py eval omega                      # トーラスの半周期 ω
    python main.py series X@pole --order 64        # カスプ級数（JSON）
    python main.py series mu_of_q --order 41       # 変換方程式の級数
    python main.py series Y@pole --out y_pole.json # 級数を JSON ファイルに保存
    python main.py verify --suite schwarz          # 検証スイート
    python main.py verify --suite all --csv        # 全スイート + CSV 保存
    python main.py verify --workers 4              # スイートを4プロセスで並列実行
    python main.py config --anchor near_two=2+i/4  # 基準点を登録
    python main.py constants                       # トーラスの定数
"""
import argparse
import json
import logging
import sys
from pathlib import Path

from mpmath import mp

import config
from automation import ReportGenerator, RunConfig, RunConfigManager, SUITE_NAMES, VerificationSuite
from burnside.forms import theta_forms
from burnside.state import BurnsideState
from elliptic.modular import klein_j, unit_lattice
from elliptic.weierstrass import weierstrass_p
from numeric.precision import format_value, parse_complex, workprec
from series.charts import get_chart
from series.export import export_series, series_to_record
from series.products import eta_product_series, theta_and_divisor_series
from series.recurrence import solve_schwarz_series, y_series_from_x
from torus.abelian import abelian_differential_series, alpha_of_tau
from torus.cover import burnside_torus
from torus.fuchsian import renormalized_constants
from utils.error_handler import (
    ConfigurationError,
    UniformizationError,
    ValidationError,
    format_error_for_report,
)
from whittaker.conversion import BURNSIDE_TO_WHITTAKER, conversion_ode_series


def setup_logging(verbose: bool = False):
    """ロギングを設定（標準出力は JSON 用に空けておく）"""
    level = logging.DEBUG if verbose else getattr(logging, config.LOG_LEVEL.upper(), logging.INFO)
    logging.basicConfig(
        level=level,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
    )


logger = logging.getLogger(__name__)


# =============================================================================
# eval
# =============================================================================

def _need_tau(tau):
    if tau is None:
        raise ValidationError("--tau が必要です")
    return tau


def _eval_wp(tau, z):
    if z is None:
        raise ValidationError("wp には --z が必要です")
    return weierstrass_p(z, unit_lattice(_need_tau(tau)))


EVAL_TARGETS = {
    "x": lambda tau, z: BurnsideState(_need_tau(tau)).x,
    "y": lambda tau, z: BurnsideState(_need_tau(tau)).y,
    "theta1": lambda tau, z: theta_forms(_need_tau(tau))[0],
    "theta2": lambda tau, z: theta_forms(_need_tau(tau))[1],
    "J": lambda tau, z: klein_j(_need_tau(tau)),
    "alpha_plus": lambda tau, z: alpha_of_tau(_need_tau(tau)),
    "wp": _eval_wp,
    "omega": lambda tau, z: burnside_torus().omega,
    "omega_prime": lambda tau, z: burnside_torus().omega_prime,
    "aleph": lambda tau, z: burnside_torus().aleph,
}

# 評価値に対応する厳密値
EXACT_VALUES = {
    "J": lambda tau: "125/27" if abs(tau - mp.sqrt(2) * mp.j) < mp.eps * 8 else None,
}


def cmd_eval(args, run_config, manager) -> int:
    """関数値を評価"""
    with workprec(run_config.precision_bits):
        tau = parse_complex(manager.resolve_tau(args.tau)) if args.tau else None
        z = parse_complex(args.z) if args.z else None
        value = EVAL_TARGETS[args.target](tau, z)
        exact = EXACT_VALUES[args.target](tau) if args.target in EXACT_VALUES and tau is not None else None
        text = format_value(value)

    if run_config.output == "json":
        print(json.dumps({
            "target": args.target,
            "tau": args.tau,
            "z": args.z,
            "precision_bits": run_config.precision_bits,
            "value": text,
            "exact": exact,
        }, ensure_ascii=False, indent=2))
        return 0

    print("\n" + "=" * 60)
    print(f"📊 {args.target}" + (f"(τ = {args.tau})" if args.tau else ""))
    print("=" * 60)
    print(f"   {text}")
    if exact:
        print(f"   厳密値: {exact}")
    return 0


# =============================================================================
# series
# =============================================================================

def _chart_terms(chart: str, order: int) -> int:
    """q の打ち切り次数 → チャートのステップ単位の項数"""
    step = get_chart(chart).ansatz[2]
    return max(1, order // step)


def _x_series(chart: str):
    return lambda order: (solve_schwarz_series(chart, order=_chart_terms(chart, order)), chart)


def _y_series(chart: str):
    def build(order):
        X = solve_schwarz_series(chart, order=_chart_terms(chart, order) + 2)
        return y_series_from_x(X), chart
    return build


def _abelian(key: str):
    return lambda order: (abelian_differential_series(order)[key], "abelian")


def _conversion(key: str):
    return lambda order: (getattr(conversion_ode_series(BURNSIDE_TO_WHITTAKER, order), key), "infinity")


SERIES_BUILDERS = {
    "X@pole": _x_series("pole"),
    "Y@pole": _y_series("pole"),
    "X@zero": _x_series("zero"),
    "Y@zero": _y_series("zero"),
    "X@branch": _x_series("half"),
    "Y@branch": _y_series("half"),
    "theta1@inf": lambda order: (theta_and_divisor_series("theta3_pow4", order), "theta_infinity"),
    "theta1@cusp": lambda order: (theta_and_divisor_series("sigma1_odd", order), "zero_cusp"),
    "dXoverY": lambda order: (eta_product_series("dx_over_y", order), "half"),
    "XdXoverY": lambda order: (eta_product_series("x_dx_over_y", order), "half"),
    "dalpha": _abelian("dalpha"),
    "alpha": _abelian("alpha"),
    "mu_of_q": _conversion("mu_of_q"),
    "q_of_mu": _conversion("q_of_mu"),
    "g2": lambda order: (theta_and_divisor_series("g2_eisenstein", order), "infinity"),
}


def series_for(name: str, order: int) -> tuple:
    """
    名前付き級数とそのチャート名

    Raises:
        ValidationError: 未知の名前、または次数が上限を超える
    """
    if name not in SERIES_BUILDERS:
        raise ValidationError(f"未知の級数: {name}（{', '.join(SERIES_BUILDERS)}）")
    if not 1 <= order <= config.SERIES_DEFAULTS["max_order"]:
        raise ValidationError(f"次数は 1〜{config.SERIES_DEFAULTS['max_order']} です: {order}")
    return SERIES_BUILDERS[name](order)


def build_series(name: str, order: int) -> dict:
    """名前付き級数の JSON 用の辞書"""
    series, chart = series_for(name, order)
    record = series_to_record(series, chart)
    record["name"] = name
    return record


def cmd_series(args, run_config, manager) -> int:
    """厳密な級数を出力（--out があればファイルにも保存）"""
    order = args.order or config.SERIES_DEFAULTS["order"]
    series, chart = series_for(args.name, order)
    record = series_to_record(series, chart)
    record["name"] = args.name
    if args.out:
        export_series(series, chart, Path(args.out))

    if run_config.output == "json":
        print(json.dumps(record, ensure_ascii=False, indent=2))
        return 0

    print("\n" + "=" * 60)
    print(f"📋 {args.name}（チャート {record['chart']}, 次数 {record['order']}）")
    print("=" * 60)
    print(f"   先頭指数: {record['lead_exp']}  ステップ: {record['step']}  環: {record['ring']}")
    if record["prefactor"]:
        print(f"   前因子: {record['prefactor']['text']}")
    print(f"   係数: {', '.join(str(c) for c in record['coeffs'])}")
    if args.out:
        print(f"\n💾 保存先: {args.out}")
    return 0


# =============================================================================
# verify
# =============================================================================

def cmd_verify(args, run_config, manager) -> int:
    """検証スイートを実行"""
    exit_code = 0
    suite_runner = VerificationSuite(run_config)
    for suite in run_config.suites:
        report = suite_runner.run(suite)
        generator = ReportGenerator(report)

        if run_config.output == "json":
            print(generator.to_json())
        else:
            print("\n" + "=" * 60)
            print(f"🔍 検証スイート: {suite}（P = {run_config.precision_bits}, seed = {run_config.seed}）")
            print("=" * 60)
            print(generator.to_text())
            table = generator.by_anchor()
            if not table.empty:
                print("\n📋 操作ごとの件数")
                print(table.to_string())
            print("\n" +("✅ すべてのチェックに合格しました" if generator.passed else "❌ 失敗したチェックがあります"))

        if args.csv:
            path = generator.save_csv()
            logger.info(f"CSV: {path}")
        if not generator.passed:
            exit_code = 1
    return exit_code


# =============================================================================
# config
# =============================================================================

# storage/run_config.json で変更できる既定値
DEFAULT_KEYS = {
    "suites": lambda text: [name.strip() for name in text.split(",") if name.strip()],
    "seed": int,
    "sample_count": int,
}


def _split_assignment(text: str) -> tuple:
    key, sep, value = text.partition("=")
    if not sep or not key.strip() or not value.strip():
        raise ValidationError(f"KEY=VALUE の形で指定してください: {text}")
    return key.strip(), value.strip()


def cmd_config(args, run_config, manager) -> int:
    """保存された既定値と基準点の表示・変更"""
    for assignment in args.set or []:
        key, value = _split_assignment(assignment)
        if key not in DEFAULT_KEYS:
            raise ValidationError(f"変更できない既定値: {key}（{', '.join(DEFAULT_KEYS)}）")
        try:
            parsed = DEFAULT_KEYS[key](value)
        except ValueError:
            raise ValidationError(f"{key} の値を解釈できません: {value}")
        if key == "suites":
            for name in parsed:
                VerificationSuite.suite_names(name)
        else:
            RunConfig(**{key: parsed}).validate()
        manager.set_default(key, parsed)

    for assignment in args.anchor or []:
        name, tau = _split_assignment(assignment)
        with workprec(run_config.precision_bits):
            if mp.im(parse_complex(tau)) <= 0:
                raise ValidationError(f"基準点は上半平面の点が必要です: {tau}")
        manager.add_anchor_tau(name, tau)

    data = {"defaults": manager.get_defaults(), "anchor_taus": manager.get_anchor_taus()}
    if run_config.output == "json":
        print(json.dumps(data, ensure_ascii=False, indent=2))
        return 0

    print("\n" + "=" * 60)
    print("⚙️ 実行設定")
    print("=" * 60)
    for key, value in data["defaults"].items():
        print(f"   {key:16s} {value}")
    print("\n📍 基準点")
    for name, tau in data["anchor_taus"].items():
        print(f"   {name:16s} {tau}")
    return 0


# =============================================================================
# constants
# =============================================================================

def cmd_constants(args, run_config, manager) -> int:
    """トーラスの定数を表示"""
    with workprec(run_config.precision_bits):
        torus = burnside_torus()
        data = torus.to_dict(digits=min(run_config.digit_tol, mp.dps - 5))
        renormalized = {key: mp.nstr(value, 15) for key, value in renormalized_constants(torus).items()}

    if run_config.output == "json":
        print(json.dumps({"torus": data, "renormalized": renormalized}, ensure_ascii=False, indent=2))
        return 0

    print("\n" + "=" * 60)
    print("📊 トーラスの定数（g₂ = 5/3, g₃ = −(7/27)√2）")
    print("=" * 60)
    for key, value in data.items():
        print(f"   {key:16s} {value}")
    print("\n📋 実数化した表示")
    for key, value in renormalized.items():
        print(f"   {key:20s} {value}")
    return 0


# =============================================================================
# エントリーポイント
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, help="2進精度（ビット）")
    common.add_argument("--order", type=int, help="打ち切り次数")
    common.add_argument("--tol", type=float, help="残差の許容値")
    common.add_argument("--format", choices=["json", "text"], help="出力形式")
    common.add_argument("--seed", type=int, help="サンプル点の乱数シード")

    parser = argparse.ArgumentParser(
        description="Burnside Uniformizer - y² = x⁵ − x の一意化",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="詳細ログを表示")

    subparsers = parser.add_subparsers(dest="command", help="コマンド")

    # eval
    p_eval = subparsers.add_parser("eval", parents=[common], help="関数値を評価")
    p_eval.add_argument("target", choices=list(EVAL_TARGETS), help="評価する関数")
    p_eval.add_argument("--tau", help="上半平面の点（例: 2i, sqrt2*i, 1/2+i）または基準点の名前")
    p_eval.add_argument("--z", help="wp の引数")

    # series
    p_series = subparsers.add_parser("series", parents=[common], help="厳密な級数を出力")
    p_series.add_argument("name", choices=list(SERIES_BUILDERS), help="級数の名前")
    p_series.add_argument("--out", help="級数を JSON ファイルに保存")

    # verify
    p_verify = subparsers.add_parser("verify", parents=[common], help="検証スイートを実行")
    p_verify.add_argument("--suite", choices=list(SUITE_NAMES) + ["all"], help="スイート名")
    p_verify.add_argument("--csv", action="store_true", help="storage/reports に CSV を保存")
    p_verify.add_argument("--workers", type=int, help="スイートを並列実行するプロセス数")

    # config
    p_config = subparsers.add_parser("config", parents=[common], help="既定値と基準点を表示・変更")
    p_config.add_argument("--set", action="append", metavar="KEY=VALUE",
                          help=f"既定値を変更（{', '.join(DEFAULT_KEYS)}）")
    p_config.add_argument("--anchor", action="append", metavar="NAME=TAU", help="基準点を登録")

    # constants
    subparsers.add_parser("constants", parents=[common], help="トーラスの定数を表示")

    return parser


def main():
    parser = build_parser()
    args = parser.parse_args()
    setup_logging(args.verbose)

    if not args.command:
        parser.print_help()
        sys.exit(0)

    commands = {
        "eval": cmd_eval,
        "series": cmd_series,
        "verify": cmd_verify,
        "config": cmd_config,
        "constants": cmd_constants,
    }

    try:
        manager = RunConfigManager()
        run_config = manager.build_run_config(args)
        exit_code = commands[args.command](args, run_config, manager)
    except (UniformizationError, ValidationError, ConfigurationError) as e:
        info = format_error_for_report(e)
        print(f"❌ {info['message']}", file=sys.stderr)
        print(f"   {info['suggestion']}", file=sys.stderr)
        sys.exit(1)
    sys.exit(exit_code)


if __name__ == "__main__":
    main()
