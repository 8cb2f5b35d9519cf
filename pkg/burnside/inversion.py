"""
x(τ) = a の数値的な逆写像と Ψ(x) の解の確認
"""
import logging

from mpmath import mp

import config
from elliptic.weierstrass import HalfPeriods, lattice_params, wp_family
from numeric.precision import current_tol
from utils.error_handler import ConvergenceError, DomainError
from .identities import x_derivatives_closed
from .schwarz import BRANCH_VALUES, check_branch_distance, schwarz_Q, tau_derivatives
from .state import BurnsideState

logger = logging.getLogger(__name__)

# 初期値の探索格子（基本領域の近傍）
SEED_REAL = [mp.mpf(k) / 2 for k in range(-3, 5)]
SEED_IMAG = [mp.mpf("0.6"), mp.mpf(1), mp.mpf("1.5"), mp.mpf("2.5")]

# 実軸上のカスプに近い逆像のための細かい格子
CUSP_SEED_REAL = [mp.mpf(k) / 16 for k in range(-32, 33)]
CUSP_SEED_IMAG = [mp.mpf("0.1"), mp.mpf("0.15"), mp.mpf("0.2"), mp.mpf("0.3"), mp.mpf("0.4")]

# 近い順にニュートン法を試す初期値の数
SEED_ATTEMPTS = 6

# x⁴ = 5 の近傍（見かけの特異点）の除外半径
QUARTIC_GUARD = mp.mpf("1e-3")


def _seed_x(tau):
    """初期値探索用の x(τ)（℘ を3点だけ評価）"""
    lp = lattice_params(HalfPeriods(2, 2 * tau))
    wp_1, wp_2, wp_tau = (wp_family(z, lp)[2] for z in (1, 2, tau))
    return (wp_1 - wp_2) / (wp_tau - wp_2)


def _ranked(a, grid) -> list:
    ranked = []
    for re, im in grid:
        tau = mp.mpc(re, im)
        try:
            ranked.append((abs(_seed_x(tau) - a), tau))
        except (DomainError, ZeroDivisionError):
            continue
    ranked.sort(key=lambda item: item[0])
    return ranked


def seed_candidates(a) -> list:
    """
    |x(τ₀) − a| の小さい順の初期値

    x は上半平面で局所単葉なので、分岐値を含まない円板 |x − a| < r の
    逆像に入った初期値からの減衰ニュートン法は a の逆像へ収束する。
    粗い格子にそのような点がなければカスプ近傍の格子も使う。

    Returns:
        list: (|x(τ₀) − a|, τ₀) のリスト（最大 SEED_ATTEMPTS 個）
    """
    margin = min(abs(a - e) for e in BRANCH_VALUES)
    ranked = _ranked(a, [(re, im) for im in SEED_IMAG for re in SEED_REAL])
    if not ranked or ranked[0][0] >= margin:
        ranked = sorted(ranked + _ranked(a, [(re, im) for im in CUSP_SEED_IMAG for re in CUSP_SEED_REAL]),
                        key=lambda item: item[0])
    if ranked:
        logger.debug(f"初期値 τ₀={mp.nstr(ranked[0][1], 8)}（|x−a|={mp.nstr(ranked[0][0], 5)}）")
    return ranked[:SEED_ATTEMPTS]


def _newton(a, tau, max_iter: int, tol):
    """減衰ニュートン法（Im τ は TAU_GUARD_RADIUS 以上に保つ）"""
    floor = mp.mpf(config.TAU_GUARD_RADIUS)
    state = BurnsideState(tau)
    error = abs(state.x - a)
    for iteration in range(max_iter):
        if error <= tol:
            logger.debug(f"invert_x 収束: {iteration} 回, τ={mp.nstr(tau, 15)}")
            return tau
        x_t, _, _ = x_derivatives_closed(state)
        step = (state.x - a) / x_t
        # 上半平面から出る・残差が増える場合は半減
        for _ in range(40):
            candidate = tau - step
            if mp.im(candidate) > floor:
                try:
                    trial = BurnsideState(candidate)
                except DomainError:
                    trial = None
                if trial is not None and abs(trial.x - a) < error:
                    break
            step /= 2
        else:
            break
        tau, state = candidate, trial
        error = abs(state.x - a)

    if error <= tol:
        return tau
    raise ConvergenceError(
        f"x(τ) = {mp.nstr(a, 10)} のニュートン法が収束しません（τ₀ から |x−a|={mp.nstr(error, 5)}）",
        error_code="newton",
    )


def invert_x(a, seed=None, max_iter: int = None):
    """
    x(τ) = a をニュートン法で解く（x_τ は閉じた式）

    Args:
        a: 目標値（分岐値 {0, ±1, ±i} 以外）
        seed: 初期値（省略時は seed_candidates の順に試す）
        max_iter: 最大反復回数（省略時は config.NEWTON_MAX_ITER）

    Returns:
        mpc: τ

    Raises:
        DomainError: a が分岐値に近い
        ConvergenceError: どの初期値からも収束しない
    """
    a = mp.mpc(a)
    check_branch_distance(a)
    max_iter = max_iter or config.NEWTON_MAX_ITER
    tol = current_tol() * max(mp.mpf(1), abs(a))
    if seed is not None:
        return _newton(a, mp.mpc(seed), max_iter, tol)

    failure = ConvergenceError(f"x(τ) = {mp.nstr(a, 10)} の初期値が見つかりません", error_code="newton")
    for distance, tau in seed_candidates(a):
        try:
            return _newton(a, tau, max_iter, tol)
        except ConvergenceError as e:
            logger.debug(f"初期値 τ₀={mp.nstr(tau, 8)}（|x−a|={mp.nstr(distance, 5)}）から収束せず")
            failure = e
    raise failure


def psi_of_tau(tau, A=0, B=1):
    """
    Ψ = √((x⁵−x)/(x⁴−5))·√℘(τ|2,2τ)·(Aτ + B)（τ の関数として）
    """
    state = BurnsideState(tau)
    x = state.x
    return mp.sqrt((x ** 5 - x) / (x ** 4 - 5)) * mp.sqrt(state.wp_tau) * (A * state.tau + B)


def psi_solution_check(a, seed=None, coefficients=((0, 1), (1, 0))) -> dict:
    """
    Ψ_xx = ½Q(x)Ψ の残差（x 微分は τ の連鎖律で計算）

        Ψ_x = Ψ_τ/x_τ,  Ψ_xx = (Ψ_ττ − Ψ_τ·x_ττ/x_τ)/x_τ²

    Args:
        a: x の値
        seed: invert_x の初期値
        coefficients: (A, B) の組のリスト

    Returns:
        dict: {(A, B): 相対残差}

    Raises:
        DomainError: a⁴ ≈ 5 または分岐値の近傍
    """
    a = mp.mpc(a)
    if abs(a ** 4 - 5) < QUARTIC_GUARD:
        raise DomainError(
            f"x⁴ = 5 の近傍です（x={mp.nstr(a, 10)}）",
            error_code="branch_value",
            guard=f"|x⁴ − 5| ≥ {mp.nstr(QUARTIC_GUARD, 3)}",
        )
    tau = invert_x(a, seed)
    state = BurnsideState(tau)
    x_t, x_tt, _ = x_derivatives_closed(state)
    half_q = schwarz_Q(state.x) / 2

    residuals = {}
    for A, B in coefficients:
        psi, psi_t, psi_tt, _ = tau_derivatives(lambda t: psi_of_tau(t, A, B), tau)
        psi_x = psi_t / x_t
        psi_xx = (psi_tt - psi_x * x_tt) / x_t ** 2
        rhs = half_q * psi
        residuals[(A, B)] = abs(psi_xx - rhs) / max(mp.mpf(1), abs(psi_xx), abs(rhs))
    logger.debug(f"Ψ の残差 x={mp.nstr(a, 8)}: {residuals}")
    return residuals
