"""
楕円積分と ℘ の逆関数
"""
import logging
from itertools import permutations

from mpmath import mp

import config
from utils.error_handler import ConvergenceError, DomainError
from .weierstrass import HalfPeriods, LatticeParams, lattice_params, nearest_translate, wp_family

logger = logging.getLogger(__name__)


def complete_elliptic_K(m):
    """
    第1種完全楕円積分 K(m)（主枝、切断線 [1, ∞)）

    Raises:
        DomainError: m が実数で m ≥ 1
    """
    m = mp.mpc(m)
    if mp.im(m) == 0 and mp.re(m) >= 1:
        raise DomainError(
            f"K(m) の切断線上です: m={mp.nstr(m, 10)}",
            error_code="branch_cut",
            guard="m ∉ [1, ∞)",
        )
    return mp.ellipk(m)


def complete_elliptic_K_prime(m):
    """K′(m) = K(1 − m)"""
    return complete_elliptic_K(1 - mp.mpc(m))


def elliptic_K_agm(m):
    """算術幾何平均による K(m) = π / (2·agm(1, √(1−m)))"""
    m = mp.mpc(m)
    return mp.pi / (2 * mp.agm(1, mp.sqrt(1 - m)))


def cubic_roots(g2, g3) -> list:
    """4t³ − g₂t − g₃ = 0 の根"""
    return mp.polyroots([4, 0, -g2, -g3], maxsteps=200, extraprec=mp.prec)


def half_periods_from_invariants(g2, g3) -> HalfPeriods:
    """
    不変量 (g₂, g₃) から半周期を復元

    根の並べ替えごとに m = (e₂−e₃)/(e₁−e₃) として
    ω = K(m)/√(e₁−e₃), ω′ = iK(1−m)/√(e₁−e₃) を試し、
    g₂, g₃ を再現するものを返す。

    Raises:
        ConvergenceError: どの並べ替えも不変量を再現しない
    """
    g2, g3 = mp.mpc(g2), mp.mpc(g3)
    if abs(g2 ** 3 - 27 * g3 ** 2) < mp.eps:
        raise DomainError("判別式が0です", error_code="degenerate_lattice", guard="g₂³ − 27g₃² ≠ 0")
    roots = cubic_roots(g2, g3)
    tol = mp.ldexp(1, -mp.prec // 2) * max(1, abs(g2), abs(g3))
    for e1, e2, e3 in permutations(roots):
        m = (e2 - e3) / (e1 - e3)
        if mp.im(m) == 0 and (mp.re(m) >= 1 or mp.re(m) <= 0):
            continue
        s = mp.sqrt(e1 - e3)
        omega = complete_elliptic_K(m) / s
        omega_prime = mp.j * complete_elliptic_K_prime(m) / s
        for candidate in (omega_prime, -omega_prime):
            try:
                hp = HalfPeriods(omega, candidate)
                lp = lattice_params(hp)
            except DomainError:
                continue
            if abs(lp.g2 - g2) < tol and abs(lp.g3 - g3) < tol:
                logger.debug(f"不変量から半周期を復元: {hp}")
                return hp
    raise ConvergenceError(
        f"半周期の復元に失敗しました: g2={mp.nstr(g2, 10)}, g3={mp.nstr(g3, 10)}",
        error_code="newton",
    )


def wp_from_invariants(z, g2, g3):
    """℘(z; g₂, g₃)"""
    return wp_family(z, half_periods_from_invariants(g2, g3))[2]


def _critical_value_preimage(v, lp: LatticeParams, hint):
    """v が e, e′, e″ のいずれかなら対応する半周期"""
    tol = mp.ldexp(1, -mp.prec // 2) * max(1, abs(v))
    pairs = (
        (lp.e, lp.omega),
        (lp.e_prime, lp.omega_prime),
        (lp.e_dprime, lp.omega + lp.omega_prime),
    )
    for value, half_period in pairs:
        if abs(v - value) < tol:
            return nearest_translate(half_period, hint, lp)
    return None


def _newton(z, v, lp: LatticeParams, max_iter: int):
    step_tol = mp.ldexp(mp.eps, 8)
    for _ in range(max_iter):
        try:
            _, _, wp, wpp = wp_family(z, lp)
        except DomainError:
            return None
        if wpp == 0:
            return None
        step = (wp - v) / wpp
        z = z - step
        if abs(step) <= step_tol * max(1, abs(z)):
            return z
    return None


def wp_inverse(v, lp: LatticeParams, branch_hint, max_iter: int = None):
    """
    ℘(z) = v の解のうち branch_hint に最も近い平行移動

    Carlson の対称積分 R_F(v−e₁, v−e₂, v−e₃) を初期値とし、
    ℘′ を使った Newton 法で精密化する。

    Args:
        v: ℘ の値
        lp: 格子パラメータ
        branch_hint: 解の近くの点

    Returns:
        mpc: 解 z

    Raises:
        ConvergenceError: Newton 法が収束しない
    """
    lp = lp.refreshed()
    v = mp.mpc(v)
    hint = mp.mpc(branch_hint)
    max_iter = max_iter or config.NEWTON_MAX_ITER

    critical = _critical_value_preimage(v, lp, hint)
    if critical is not None:
        return critical

    seeds = [hint]
    try:
        carlson = mp.elliprf(v - lp.e, v - lp.e_prime, v - lp.e_dprime)
        seeds += [nearest_translate(s * carlson, hint, lp) for s in (1, -1)]
    except (ValueError, ZeroDivisionError) as e:
        logger.debug(f"Carlson 初期値の計算に失敗: {e}")

    tol = mp.ldexp(1, -mp.prec // 2) * max(1, abs(v))
    solutions = []
    for seed in seeds:
        z = _newton(seed, v, lp, max_iter)
        if z is None:
            continue
        if abs(wp_family(z, lp)[2] - v) < tol:
            solutions.append(nearest_translate(z, hint, lp))
    if not solutions:
        raise ConvergenceError(
            f"℘⁻¹ の Newton 法が収束しません: v={mp.nstr(v, 12)}, hint={mp.nstr(hint, 12)}",
            error_code="newton",
        )
    # ±z の両方の平行移動を候補にして最も近いものを選ぶ
    candidates = []
    for z in solutions:
        candidates += [z, nearest_translate(-z, hint, lp)]
    return min(candidates, key=lambda z: abs(z - hint))
