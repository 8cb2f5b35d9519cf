"""
検証スイート
シード付きサンプル点での残差・厳密な係数・既知の定数を確認してレポートにまとめる
"""
import logging
import multiprocessing
import time
from fractions import Fraction

import numpy as np
from mpmath import mp

import config
from burnside.forms import THETA1, THETA2, theta1_identity_residuals, theta1_infinity_series, theta1_zero_cusp_series
from burnside.identities import klein_j_relation, verify_four_identities, wp_ratio_residuals
from burnside.inversion import psi_solution_check
from burnside.schwarz import schwarz_residual, y_schwarz_residual, z_schwarzian_check
from burnside.state import BurnsideState
from elliptic.modular import log_eta_derivative_residual, verify_diff_system
from numeric.cyclo import CycloQ
from numeric.precision import workprec
from series.laurent import LaurentSeries
from series.products import eta_product_series, theta_and_divisor_series
from series.recurrence import curve_identity_defect, solve_schwarz_series, y_series_from_x
from torus.abelian import alpha_derivative_residual, palpha_check, prop_schwarzian_residual, series_checks, series_vs_numeric
from torus.cover import burnside_torus, omega_by_modular_inversion, rescaling_residual, wp_prime_aleph
from torus.fuchsian import (
    BURNSIDE,
    ELLIPTIC_ORDER_2,
    LOCAL_COEFFICIENT,
    PUNCTURE,
    VARIANTS,
    FuchsianTorusEq,
    lambda_local_coefficients,
    renormalized_constants,
    renormalized_residual,
)
from torus.ramification import (
    ALPHA_TO_X,
    X_TO_ALPHA,
    aleph_value_check,
    aleph_branch_residual,
    aleph_coefficient_closed_form,
    aleph_series_coefficient,
    local_branch_residual,
    puiseux_at_branch,
    puiseux_closed_form,
    puiseux_residual,
    ramification_profile,
)
from torus.xi import holo_period_check, xi_solution_check
from utils.error_handler import ValidationError, log_check, safe_check
from whittaker.conjecture import burnside_curve, conjecture_ratio, whittaker_curve, whittaker_Q
from whittaker.conversion import (
    BURNSIDE_TO_WHITTAKER,
    conversion_ode_residual,
    conversion_ode_series,
    eta_integral_series,
    eta_power_ode_check,
    eta_quadrature_check,
    ETA_FOURTH,
)
from whittaker.hypergeometric import (
    HypergeometricParams,
    gauss_2f1,
    hypergeometric_reduce,
    j_inversion_check,
    psi_tilde_residual,
    x4_recovery_check,
)
from whittaker.substitution import lambda_pullback_residual, reduction_residual

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
SKIP = "skip"

SUITE_NAMES = ("schwarz", "identities", "forms", "cover", "torus-fuchsian", "whittaker", "conversion")

# 表示値（10進の打ち切り）
OMEGA_TEXT = "2.118156723947863188505038347005"
ALEPH_TEXT = "0.390699665709"
ALEPH_MIRROR_TEXT = "2.604826300529"
ZETA_ALEPH_TEXT = "3.83102282421"

# 級数の先頭係数（チャート名, 係数）
CUSP_COEFFICIENTS = {
    "X@pole": ("pole", [1, 2, -1, -2, 3, 2, -4, -4]),
    "X@zero": ("zero", [1, 2, 5, 10, 18, 32]),
    "X@branch": ("half", [1, 4, 8, 16, 32, 56, 96]),
}
Y_COEFFICIENTS = {
    "Y@pole": ("pole", [1, -3, -3, 14, 6, -33, -20]),
    "Y@zero": ("zero", [1, 9, 42, 147, 444, 1206]),
    "Y@branch": ("half", [1, 6, 24, 80, 231, 606]),
}

MU_COEFFICIENTS = [
    Fraction(1),
    Fraction(-5, 21),
    Fraction(-78, 833),
    Fraction(4001, 39445),
    Fraction(168948, 1711913),
]
Q_OF_MU_COEFFICIENTS = [Fraction(1), Fraction(5, 21), Fraction(503, 833), Fraction(4138924, 2011695)]
G2_COEFFICIENTS = [Fraction(1, 240), 1, 9, 28, 73, 126, 252]

# 数値微分・級数の打ち切りで決まる許容値
XI_TOL = 1e-10
PSI_TILDE_TOL = 1e-15
ALPHA_SERIES_TOL = 1e-15
LOCAL_SERIES_TOL = 1e-10
PERIOD_TOL = 1e-8


# =============================================================================
# サンプル点
# =============================================================================

def sample_taus(seed: int, count: int, region: dict = None) -> list:
    """
    {|Re τ| ≤ re_max, im_min ≤ Im τ ≤ im_max} の一様乱数点

    分岐値の逆像まわりのガード円は各チェックの DomainError（skip）で除く。
    """
    region = region or config.SAMPLE_REGION
    rng = np.random.default_rng(seed)
    re = rng.uniform(-region["re_max"], region["re_max"], count)
    im = rng.uniform(region["im_min"], region["im_max"], count)
    return [mp.mpc(float(a), float(b)) for a, b in zip(re, im)]


def sample_alphas(seed: int, count: int) -> list:
    """トーラスの基本セル 2ω·s + 2ω′·t（0 < s, t < 1）の一様乱数点"""
    torus = burnside_torus()
    rng = np.random.default_rng(seed + 1)
    s = rng.uniform(0.05, 0.95, count)
    t = rng.uniform(0.05, 0.95, count)
    return [2 * torus.omega * mp.mpf(float(a)) + 2 * torus.omega_prime * mp.mpf(float(b)) for a, b in zip(s, t)]


# =============================================================================
# チェック記録
# =============================================================================

def _text(value):
    if value is None or isinstance(value, (str, bool)):
        return value
    if isinstance(value, (mp.mpf, mp.mpc, float, complex)):
        return mp.nstr(value, 20)
    if isinstance(value, (list, tuple)):
        return [_text(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _text(v) for k, v in value.items()}
    return str(value)


@safe_check(default_status=FAIL)
def _evaluate(body, tol) -> dict:
    outcome = body()
    if "exact" in outcome:
        status = PASS if outcome["exact"] else FAIL
        residual = None
    else:
        residual = outcome["residual"]
        status = PASS if residual <= outcome.get("tol", tol) else FAIL
    return {
        "status": status,
        "expected": _text(outcome.get("expected")),
        "computed": _text(outcome.get("computed")),
        "residual": None if residual is None else mp.nstr(residual, 5),
    }


def run_check(check_id: str, anchor: str, body, tol) -> dict:
    """
    1つのチェックを実行して記録を作る

    Args:
        check_id: チェックID
        anchor: 対応する操作（"モジュール.操作"）
        body: 引数なしで {"computed", "expected", "residual" | "exact", ["tol"]} を返す関数
        tol: 既定の許容値

    Returns:
        dict: {id, anchor, status, expected, computed, residual, ms}
    """
    start = time.perf_counter()
    result = _evaluate(body, tol)
    record = {
        "id": check_id,
        "anchor": anchor,
        "status": result["status"],
        "expected": result.get("expected"),
        "computed": result.get("computed"),
        "residual": result.get("residual"),
        "ms": round((time.perf_counter() - start) * 1000, 1),
    }
    if "detail" in result:
        record["detail"] = result["detail"]
    log_check(check_id, record["residual"], record["status"])
    return record


def _residual(computed, expected, residual, tol=None) -> dict:
    outcome = {"computed": computed, "expected": expected, "residual": residual}
    if tol is not None:
        outcome["tol"] = tol
    return outcome


def _exact(computed, expected) -> dict:
    return {"computed": computed, "expected": expected, "exact": computed == expected}


def _decimal(computed, text: str) -> dict:
    """表示された桁までの一致（打ち切りなので 10^(−桁数) 未満の差）"""
    decimals = len(text.split(".")[1])
    tol = max(mp.mpf(10) ** -decimals, mp.ldexp(1, -mp.prec + 8))
    return _residual(computed, text, abs(computed - mp.mpf(text)), tol)


def _max_value(values) -> mp.mpf:
    return max(mp.mpf(abs(v)) for v in values)


def _leading(series: LaurentSeries, count: int) -> list:
    return [CycloQ.coerce(c) for c in series.coeffs()[:count]]


def _divisor_sum(n: int) -> int:
    return sum(d for d in range(1, n + 1) if n % d == 0)


# =============================================================================
# スイート本体
# =============================================================================

class VerificationSuite:
    """
    名前付き検証スイートの実行

    機能:
    1. シード付きサンプル点の生成
    2. スイートごとのチェック実行（DomainError は skip、その他の例外は fail）
    3. {suite, config, checks} 形式のレポート作成

    Args:
        run_config: RunConfig
    """

    def __init__(self, run_config):
        self.run_config = run_config
        self.taus = []
        self.tol = None
        self.checks = []
        logger.info("VerificationSuite初期化完了")

    def run(self, suite: str = "all") -> dict:
        """
        スイートを実行

        Args:
            suite: SUITE_NAMES のいずれか、または "all"

        Returns:
            dict: {"suite", "config", "checks"}

        Raises:
            ValidationError: 未知のスイート名
        """
        names = self.suite_names(suite)
        workers = min(self.run_config.workers, len(names))
        if workers > 1:
            logger.info(f"{len(names)}スイートを {workers} プロセスで実行")
            jobs = [(self.run_config.to_dict(), name) for name in names]
            with multiprocessing.Pool(processes=workers) as pool:
                # map は入力順で返すので結果は逐次実行と同じ並び
                results = pool.map(_suite_worker, jobs)
            self.checks = [record for checks in results for record in checks]
        else:
            self.checks = []
            for name in names:
                self.run_one(name)
        return {"suite": suite, "config": self.run_config.to_dict(), "checks": self.checks}

    def run_one(self, name: str) -> list:
        """1つのスイートを現在のプロセスで実行し、そのチェック記録を返す"""
        start = len(self.checks)
        with workprec(self.run_config.precision_bits):
            self.tol = self.run_config.tolerance.residual_tol
            self.taus = sample_taus(self.run_config.seed, self.run_config.sample_count)
            logger.info(f"スイート {name} を実行中...")
            SUITES[name](self)
        checks = self.checks[start:]
        failed = sum(1 for c in checks if c["status"] == FAIL)
        logger.info(f"スイート {name} 完了: {len(checks)}件 (失敗 {failed}件)")
        return checks

    @staticmethod
    def suite_names(suite: str) -> tuple:
        if suite == "all":
            return SUITE_NAMES
        if suite not in SUITE_NAMES:
            raise ValidationError(f"未知のスイート: {suite}（{', '.join(SUITE_NAMES)}, all）")
        return (suite,)

    def check(self, check_id: str, anchor: str, body, tol=None):
        self.checks.append(run_check(check_id, anchor, body, self.tol if tol is None else tol))

    def each_tau(self, check_id: str, anchor: str, body, taus: list = None, tol=None):
        """サンプル点ごとに body(τ) を実行"""
        for k, tau in enumerate(self.taus if taus is None else taus):
            self.check(f"{check_id}[{k}]", anchor, lambda tau=tau: body(tau), tol)


# -----------------------------------------------------------------------------
# schwarz: x(τ), y(τ) のシュワルツ方程式とカスプ級数
# -----------------------------------------------------------------------------

def _schwarz_diff(tau):
    result = schwarz_residual(tau)
    return _residual(result.lhs, result.rhs, result.relative)


def _schwarz_closed(tau):
    result = schwarz_residual(tau, method="closed")
    return _residual(result.lhs, result.rhs, result.relative)


def _y_schwarz(tau):
    return _residual(None, None, y_schwarz_residual(tau))


def _z_normalization(tau):
    result = z_schwarzian_check(tau)
    return _residual(result["formula"], "z ∈ {0, ±3} at cusps", result["residuals"][result["chosen"]])


def _cusp_x(chart: str, expected: list):
    def body():
        X = solve_schwarz_series(chart, order=len(expected))
        return _exact(_leading(X, len(expected)), [CycloQ(v) for v in expected])
    return body


def _cusp_y(chart: str, expected: list):
    def body():
        Y = y_series_from_x(solve_schwarz_series(chart, order=len(expected) + 2))
        return _exact(_leading(Y, len(expected)), [CycloQ(v) for v in expected])
    return body


def _curve_identity(chart: str, order: int):
    def body():
        X = solve_schwarz_series(chart, order=order)
        defect = curve_identity_defect(X, y_series_from_x(X))
        return _exact(len(defect.terms), 0)
    return body


def _branch_product(order: int):
    def body():
        X = solve_schwarz_series("half", order=order)
        Y = y_series_from_x(X)
        count = min(len(X.coeffs()), len(Y.coeffs())) - 1
        x_product = eta_product_series("x_branch", 2 * count)
        y_product = eta_product_series("y_branch", 2 * count)
        n = min(count, len(x_product.coeffs()), len(y_product.coeffs()))
        computed = (_leading(x_product, n), _leading(y_product, n))
        return _exact(computed, (_leading(X, n), _leading(Y, n)))
    return body


def schwarz_suite(runner: VerificationSuite):
    runner.each_tau("schwarz.diff", "burnside-core.schwarz_residual", _schwarz_diff)
    runner.each_tau("schwarz.closed", "burnside-core.x_derivatives_closed", _schwarz_closed)
    runner.each_tau("schwarz.y", "burnside-core.y_schwarz_residual", _y_schwarz)
    runner.each_tau("schwarz.z", "burnside-core.z_schwarzian_check", _z_normalization, runner.taus[:3])

    for name, (chart, expected) in CUSP_COEFFICIENTS.items():
        runner.check(f"series.{name}", "series-engine.solve_schwarz_series", _cusp_x(chart, expected))
    for name, (chart, expected) in Y_COEFFICIENTS.items():
        runner.check(f"series.{name}", "series-engine.y_series_from_x", _cusp_y(chart, expected))
    order = runner.run_config.truncation_order
    for chart in ("pole", "zero", "half", "inf", "one", "minus_one"):
        runner.check(f"series.curve@{chart}", "series-engine.y_series_from_x", _curve_identity(chart, order))
    runner.check("series.branch_products", "series-engine.eta_product_series", _branch_product(order))


# -----------------------------------------------------------------------------
# identities: ℘ の恒等式と J の関係
# -----------------------------------------------------------------------------

def _four_identities(tau):
    return _residual(None, None, _max_value(verify_four_identities(BurnsideState(tau)).values()))


def _wp_ratios(tau):
    return _residual(None, None, _max_value(wp_ratio_residuals(BurnsideState(tau)).values()))


def _j_relation(tau):
    return _residual(None, None, _max_value(klein_j_relation(BurnsideState(tau)).values()))


def _curve_point(tau):
    return _residual(None, None, BurnsideState(tau).curve_residual())


def _psi_solution(a):
    def body():
        return _residual(None, None, _max_value(psi_solution_check(a).values()))
    return body


def identities_suite(runner: VerificationSuite):
    runner.each_tau("identities.four", "burnside-core.verify_four_identities", _four_identities)
    runner.each_tau("identities.wp_ratio", "burnside-core.burnside_state", _wp_ratios)
    runner.each_tau("identities.j", "burnside-core.klein_j_relation", _j_relation)
    runner.each_tau("identities.curve", "burnside-core.burnside_state", _curve_point)

    anchors = [mp.mpc(0, 1), mp.mpc("0.25", "1.5")]
    runner.each_tau(
        "elliptic.diff_system",
        "elliptic.verify_diff_system",
        lambda tau: _residual(None, None, _max_value(verify_diff_system(tau).values())),
        anchors,
    )
    runner.each_tau(
        "elliptic.log_eta",
        "elliptic.dedekind_eta",
        lambda tau: _residual(None, None, log_eta_derivative_residual(tau)),
        anchors,
    )
    for k, a in enumerate((mp.mpf(2), mp.mpc("0.5", "0.5"))):
        runner.check(f"identities.psi[{k}]", "burnside-core.psi_solution_check", _psi_solution(a))


# -----------------------------------------------------------------------------
# forms: 重さ2の形式 Θ₁, Θ₂
# -----------------------------------------------------------------------------

def _theta1_identities(tau):
    return _residual(None, None, _max_value(theta1_identity_residuals(tau).values()))


def _weight(form, element):
    def body(tau):
        return _residual(None, None, form.weight_residual(tau, element))
    return body


def _theta1_infinity(tau):
    value, tail = theta1_infinity_series(tau)
    direct = THETA1.value_at(tau)
    scale = max(mp.mpf(1), abs(direct))
    return _residual(value, direct, abs(value - direct) / scale, max(mp.ldexp(1, -mp.prec // 2), 4 * tail / scale))


def _theta1_cusp(tau):
    value, tail = theta1_zero_cusp_series(tau)
    direct = THETA1.value_at(tau)
    scale = max(mp.mpf(1), abs(direct))
    return _residual(value, direct, abs(value - direct) / scale, max(mp.ldexp(1, -mp.prec // 2), 4 * tail / scale))


def _sigma1_table():
    series = theta_and_divisor_series("sigma1_odd", 4 * 31)
    computed = [series.coefficient(4 * k) for k in range(31)]
    return _exact(computed, [Fraction(_divisor_sum(2 * k + 1)) for k in range(31)])


def forms_suite(runner: VerificationSuite):
    runner.each_tau("forms.theta1", "burnside-core.theta_forms", _theta1_identities)
    runner.each_tau("forms.theta1@inf", "series-engine.theta_and_divisor_series", _theta1_infinity)
    translation = (1, 4, 0, 1)
    runner.each_tau("forms.weight1", "burnside-core.theta_forms", _weight(THETA1, translation), runner.taus[:4])
    runner.each_tau("forms.weight2", "burnside-core.theta_forms", _weight(THETA2, translation), runner.taus[:4])

    # τ → τ/(4τ+1) は Im τ を縮めるので 0 の近くの点だけで見る
    near_zero = [mp.mpc(0, "0.25"), mp.mpc("0.1", "0.3")]
    inversion = (1, 0, 4, 1)
    runner.each_tau("forms.weight1_inv", "burnside-core.theta_forms", _weight(THETA1, inversion), near_zero)
    runner.each_tau("forms.weight2_inv", "burnside-core.theta_forms", _weight(THETA2, inversion), near_zero)
    cusp_points = [mp.mpc("0.05", "0.25"), mp.mpc("0.1", "0.4"), mp.mpc(0, "0.3")]
    runner.each_tau("forms.theta1@cusp", "series-engine.theta_and_divisor_series", _theta1_cusp, cusp_points)
    runner.check("forms.sigma1_odd", "series-engine.theta_and_divisor_series", _sigma1_table)


# -----------------------------------------------------------------------------
# cover: トーラス、分岐、アーベル積分
# -----------------------------------------------------------------------------

def _genus(direction: str):
    def body():
        return _exact(ramification_profile(direction).genus_cover, 2)
    return body


def _omega():
    return _decimal(burnside_torus().omega, OMEGA_TEXT)


def _omega_inversion():
    omega = burnside_torus().omega
    value = omega_by_modular_inversion()
    return _residual(value, omega, abs(value - omega) / abs(omega))


def _aleph():
    return _decimal(mp.im(burnside_torus().aleph), ALEPH_TEXT)


def _aleph_mirror():
    return _decimal(mp.im(burnside_torus().aleph_mirror), ALEPH_MIRROR_TEXT)


def _wp_prime_aleph():
    torus = burnside_torus()
    value = torus.wp_prime(torus.aleph_oriented)
    expected = wp_prime_aleph()
    return _residual(value, expected, abs(value - expected) / abs(expected))


def _aleph_values():
    return _residual(None, None, _max_value(aleph_value_check().values()))


def _torus_j():
    value = burnside_torus().klein_j()
    expected = mp.mpf(125) / 27
    return _residual(value, "125/27", abs(value - expected) / expected)


def _rescaling():
    return _residual(None, None, rescaling_residual(mp.mpc("0.3", "0.2")))


def _local_branch():
    return _residual(None, None, _max_value(local_branch_residual(mp.mpf("1e-5")).values()), LOCAL_SERIES_TOL)


def _puiseux():
    return _residual(None, None, puiseux_residual(mp.mpf("1e-6")), LOCAL_SERIES_TOL)


def _puiseux_coefficients():
    # c₁ の符号に依らない c₁², c₁c₃ で比べる
    computed, closed = puiseux_at_branch(), puiseux_closed_form()
    square = abs(computed["sqrt"] ** 2 - closed["sqrt"] ** 2)
    product = abs(computed["sqrt"] * computed["sqrt3"] - closed["sqrt"] * closed["sqrt3"])
    return _residual(computed["sqrt"], closed["sqrt"], max(square, product))


def _aleph_coefficient(sign: int):
    def body():
        value = aleph_series_coefficient(sign)
        expected = aleph_coefficient_closed_form()
        return _residual(value, "2^(7/8)", abs(abs(value) - expected) / expected)
    return body


def _aleph_branch(sign: int):
    def body():
        return _residual(None, None, aleph_branch_residual(mp.mpf("1e-14"), sign), LOCAL_SERIES_TOL)
    return body


def _holo_period():
    result = holo_period_check()
    residual = max(result["integer_residual"], result["alpha_residual"])
    return _residual(result["coordinates"], "lattice point", residual, PERIOD_TOL)


def _abelian_series():
    checks = series_checks()
    return _exact(checks, {name: True for name in checks})


def _alpha_derivative(tau):
    result = alpha_derivative_residual(tau)
    return _residual(result["lhs"], result["rhs"], max(result["residual"], result["y_sign_residual"]))


def _alpha_schwarzian(tau):
    result = prop_schwarzian_residual(tau)
    return _residual(result["lhs"], result["rhs"], result["residual"])


def _palpha(tau):
    result = palpha_check(tau)
    return _residual(None, None, max(result["quadratic"], result["derivative"]))


def _alpha_series(tau):
    result = series_vs_numeric(tau)
    return _residual(result["series"], result["numeric"], result["residual"], ALPHA_SERIES_TOL)


def cover_suite(runner: VerificationSuite):
    runner.check("cover.genus_alpha_to_x", "torus-cover.ramification_profile", _genus(ALPHA_TO_X))
    runner.check("cover.genus_x_to_alpha", "torus-cover.ramification_profile", _genus(X_TO_ALPHA))
    runner.check("cover.omega", "torus-cover.burnside_torus", _omega)
    runner.check("cover.omega_inversion", "torus-cover.burnside_torus", _omega_inversion)
    runner.check("cover.J", "torus-cover.burnside_torus", _torus_j)
    runner.check("cover.rescaling", "torus-cover.burnside_torus", _rescaling)
    runner.check("cover.aleph", "torus-cover.find_aleph", _aleph)
    runner.check("cover.aleph_mirror", "torus-cover.find_aleph", _aleph_mirror)
    runner.check("cover.wp_prime_aleph", "torus-cover.find_aleph", _wp_prime_aleph)
    runner.check("cover.aleph_values", "torus-cover.cover_wp_of_x", _aleph_values)
    runner.check("cover.local_branch", "torus-cover.cover_wp_of_x", _local_branch)
    runner.check("cover.puiseux", "torus-cover.puiseux_at_branch", _puiseux)
    runner.check("cover.puiseux_coefficients", "torus-cover.puiseux_at_branch", _puiseux_coefficients)
    for sign, label in ((1, "plus"), (-1, "minus")):
        runner.check(f"cover.aleph_coefficient_{label}", "torus-cover.ramification_profile", _aleph_coefficient(sign))
        runner.check(f"cover.aleph_branch_{label}", "torus-cover.ramification_profile", _aleph_branch(sign))
    runner.check("cover.holo_period", "torus-cover.holo_integral_check", _holo_period)
    runner.check("cover.abelian_series", "torus-cover.abelian_differential_series", _abelian_series)

    taus = runner.taus[:2]
    runner.each_tau("cover.alpha_derivative", "torus-cover.alpha_of_tau", _alpha_derivative, taus)
    runner.each_tau("cover.alpha_schwarzian", "torus-cover.alpha_of_tau", _alpha_schwarzian, taus)
    runner.each_tau("cover.palpha", "torus-cover.alpha_of_tau", _palpha, taus)
    near_branch = [mp.mpc("0.5", "0.1"), mp.mpc("0.52", "0.12")]
    runner.each_tau("cover.alpha_series", "torus-cover.abelian_differential_series", _alpha_series, near_branch)


# -----------------------------------------------------------------------------
# torus-fuchsian: トーラス上の方程式
# -----------------------------------------------------------------------------

def _equation_residual(equation: FuchsianTorusEq, method: str, alpha):
    def body():
        return _residual(None, None, getattr(equation, method)(alpha))
    return body


def _local_table(equation: FuchsianTorusEq):
    def body():
        worst = mp.mpf(0)
        for entry in equation.local_coefficient_table():
            expected = entry["expected_quadratic"]
            worst = max(
                worst,
                abs(entry["quadratic"] - mp.mpf(expected.numerator) / expected.denominator),
                abs(entry["residue"] - entry["expected_residue"]),
            )
        return _residual(None, {PUNCTURE: "-1/4", ELLIPTIC_ORDER_2: "-3/16"}, worst)
    return body


def _lambda_local():
    table = lambda_local_coefficients()
    expected = {
        "0": LOCAL_COEFFICIENT[PUNCTURE],
        "1": LOCAL_COEFFICIENT[PUNCTURE],
        "∞": LOCAL_COEFFICIENT[PUNCTURE],
        "-2+2√2": LOCAL_COEFFICIENT[ELLIPTIC_ORDER_2],
        "-2-2√2": LOCAL_COEFFICIENT[ELLIPTIC_ORDER_2],
    }
    return _exact(table, expected)


def _zeta_aleph():
    return _decimal(renormalized_constants()["zeta_aleph"], ZETA_ALEPH_TEXT)


def _renormalized(alpha_tilde):
    def body():
        return _residual(None, None, renormalized_residual(alpha_tilde))
    return body


def _xi(alpha):
    def body():
        return _residual(None, None, max(r["residual"] for r in xi_solution_check(alpha)), XI_TOL)
    return body


def torus_fuchsian_suite(runner: VerificationSuite):
    alphas = sample_alphas(runner.run_config.seed, runner.run_config.sample_count)
    for variant in VARIANTS:
        equation = FuchsianTorusEq(variant)
        tag = variant.lower()
        for k, alpha in enumerate(alphas):
            runner.check(f"fuchsian.{tag}.forms[{k}]", "torus-cover.torus_fuchsian_Q",
                         _equation_residual(equation, "forms_residual", alpha))
        for k, alpha in enumerate(alphas[:4]):
            runner.check(f"fuchsian.{tag}.construction[{k}]", "torus-cover.torus_fuchsian_Q",
                         _equation_residual(equation, "construction_residual", alpha))
            runner.check(f"fuchsian.{tag}.ellipticity[{k}]", "torus-cover.torus_fuchsian_Q",
                         _equation_residual(equation, "ellipticity_residual", alpha))
            runner.check(f"fuchsian.{tag}.constant_term[{k}]", "torus-cover.torus_fuchsian_Q",
                         _equation_residual(equation, "constant_term_residual", alpha))
        runner.check(f"fuchsian.{tag}.local_coefficients", "torus-cover.torus_fuchsian_Q", _local_table(equation))

    runner.check("fuchsian.lambda_local", "torus-cover.lambda_fuchsian_Q", _lambda_local)
    runner.check("fuchsian.zeta_aleph", "torus-cover.torus_fuchsian_Q", _zeta_aleph)
    for k, alpha_tilde in enumerate((mp.mpc("0.3", "0.5"), mp.mpc("0.7", "0.9"))):
        runner.check(f"fuchsian.renormalized[{k}]", "torus-cover.torus_fuchsian_Q", _renormalized(alpha_tilde))

    torus = burnside_torus()
    for k, alpha in enumerate((torus.omega / 3 + torus.omega_prime / 2, torus.omega / 2 + torus.omega_prime / 3)):
        runner.check(f"fuchsian.xi[{k}]", "torus-cover.xi_solution_check", _xi(alpha))


# -----------------------------------------------------------------------------
# whittaker: 予想の Q と超幾何型への帰着
# -----------------------------------------------------------------------------

def _conjecture_ratio():
    return _exact(conjecture_ratio(Fraction(2)), Fraction(3, 4))


def _identity(curve_factory):
    def body():
        return _exact(whittaker_Q(curve_factory()).identity_defect(), [])
    return body


def _double_poles():
    table = whittaker_Q(burnside_curve()).double_pole_coefficients()
    return _exact(table, {key: Fraction(-3, 16) for key in table})


def _reduction_constants():
    reduction = hypergeometric_reduce(2, 1)
    computed = (reduction.coefficient, reduction.exponents)
    return _exact(computed, (Fraction(-6, 25), (Fraction(2, 5), Fraction(3, 5))))


def _psi_tilde(index: int):
    def body():
        return _residual(None, None, psi_tilde_residual(index=index), PSI_TILDE_TOL)
    return body


def _reduction():
    residual, computed, expected = reduction_residual()
    return _residual(computed, expected, residual)


def _lambda_pullback():
    residual, computed, expected = lambda_pullback_residual()
    return _residual(computed, expected, residual)


def _gauss_vs_mpmath():
    p = HypergeometricParams(Fraction(1, 3), Fraction(1, 5), Fraction(3, 4))
    z = mp.mpf("0.3")
    value, _ = gauss_2f1(p, z)
    expected = mp.hyp2f1(mp.mpf(1) / 3, mp.mpf(1) / 5, mp.mpf(3) / 4, z)
    return _residual(value, expected, abs(value - expected) / abs(expected))


def _j_inversion():
    result = j_inversion_check()
    return _residual(result["value"], None, result["residual"])


def _x4_recovery(tau):
    result = x4_recovery_check(tau)
    return _residual(result["z"], None, result["distance"])


def whittaker_suite(runner: VerificationSuite):
    runner.check("whittaker.ratio", "whittaker.whittaker_Q", _conjecture_ratio)
    runner.check("whittaker.identity_burnside", "whittaker.accessory_decomposition", _identity(burnside_curve))
    runner.check("whittaker.identity_x5_plus_1", "whittaker.accessory_decomposition", _identity(whittaker_curve))
    runner.check("whittaker.double_poles", "whittaker.whittaker_Q", _double_poles)
    runner.check("whittaker.reduction_constants", "whittaker.hypergeometric_reduce", _reduction_constants)
    runner.check("whittaker.psi_tilde[1]", "whittaker.gauss_2f1", _psi_tilde(1))
    runner.check("whittaker.psi_tilde[2]", "whittaker.gauss_2f1", _psi_tilde(2))
    runner.check("whittaker.gauss_2f1", "whittaker.gauss_2f1", _gauss_vs_mpmath)
    runner.check("whittaker.j_inversion", "whittaker.gauss_2f1", _j_inversion)
    runner.check("whittaker.reduction", "whittaker.substitution_transform", _reduction)
    runner.check("whittaker.lambda_pullback", "whittaker.substitution_transform", _lambda_pullback)
    runner.each_tau("whittaker.x4_recovery", "burnside-core.klein_j_relation", _x4_recovery, runner.taus[:3])


# -----------------------------------------------------------------------------
# conversion: 大域座標の変換
# -----------------------------------------------------------------------------

def _mu_coefficients():
    series = conversion_ode_series(BURNSIDE_TO_WHITTAKER, 41)
    return _exact(series.mu_of_q.coeffs()[:5], MU_COEFFICIENTS)


def _q_of_mu_coefficients():
    series = conversion_ode_series(BURNSIDE_TO_WHITTAKER, 33)
    return _exact(series.q_of_mu.coeffs()[:4], Q_OF_MU_COEFFICIENTS)


def _g2_coefficients():
    series = theta_and_divisor_series("g2_eisenstein", 49)
    return _exact([series.coefficient(8 * k) for k in range(7)], [Fraction(c) for c in G2_COEFFICIENTS])


def _eta_integral(order: int):
    def body():
        return _exact(conversion_ode_series(ETA_FOURTH, order).ratio, eta_integral_series(order))
    return body


def _eta_quadrature(tau):
    result = eta_quadrature_check(tau)
    return _residual(result["schwarzian"], result["expected"], result["residual"])


def _conversion_numeric(order: int):
    def body(tau):
        result = conversion_ode_residual(conversion_ode_series(BURNSIDE_TO_WHITTAKER, order), tau)
        return _residual(result["schwarzian"], result["expected"], result["residual"])
    return body


def _eta_power(n: int, tau):
    def body():
        return _residual(None, None, eta_power_ode_check(n, tau))
    return body


def conversion_suite(runner: VerificationSuite):
    order = runner.run_config.truncation_order
    runner.check("conversion.mu_of_q", "whittaker.conversion_ode_series", _mu_coefficients)
    runner.check("conversion.q_of_mu", "series-engine.series_revert", _q_of_mu_coefficients)
    runner.check("conversion.g2", "series-engine.theta_and_divisor_series", _g2_coefficients)
    runner.check("conversion.eta_integral", "whittaker.conversion_ode_series", _eta_integral(order))
    upper = [mp.mpc(0, 1), mp.mpc("0.3", "1.2")]
    runner.each_tau("conversion.eta_quadrature", "whittaker.conversion_ode_series", _eta_quadrature, upper)
    runner.each_tau("conversion.numeric", "whittaker.conversion_ode_series", _conversion_numeric(order),
                    [mp.mpc(0, 2), mp.mpc("0.5", 2)])
    tau = runner.taus[0] if runner.taus else mp.mpc(0, 1)
    for n in (-2, 0, 1, 4):
        runner.check(f"conversion.eta_power[{n}]", "whittaker.eta_power_ode_check", _eta_power(n, tau))


SUITES = {
    "schwarz": schwarz_suite,
    "identities": identities_suite,
    "forms": forms_suite,
    "cover": cover_suite,
    "torus-fuchsian": torus_fuchsian_suite,
    "whittaker": whittaker_suite,
    "conversion": conversion_suite,
}


def _suite_worker(job: tuple) -> list:
    """プロセスプール用: (RunConfig の辞書, スイート名) → チェック記録"""
    from automation.config_manager import RunConfig

    settings, name = job
    return VerificationSuite(RunConfig(**settings)).run_one(name)
