"""
ヤコビの2次被覆と複素乗法を持つトーラス

    y² = x(x−1)(x−a)(x−b)(x−ab),  λ = (1−a)(1−b)x / ((x−a)(x−b))
    μ² = λ(λ−1)(kλ−1),  k± = −(√a ± √b)² / ((a−1)(b−1))

バーンサイドの曲線は a = −1, b = i の場合で、上の符号のトーラス
℘′² = 4(℘ − √2/3)(℘ + (3+√2)/6)(℘ − (3−√2)/6) を2重に被覆する。
"""
import logging
from fractions import Fraction

from mpmath import mp

from elliptic.integrals import half_periods_from_invariants, wp_from_invariants, wp_inverse
from elliptic.modular import dedekind_eta, g2_of_tau, klein_j
from elliptic.weierstrass import HalfPeriods, lattice_params, wp_family
from numeric.cyclo import CycloQ, I, K_PLUS, ONE, SQRT_I
from utils.error_handler import ConvergenceError, DomainError, ValidationError

logger = logging.getLogger(__name__)

# ℘(ℵ) = −7/2 − (13/6)√2
WP_ALEPH = CycloQ(Fraction(-7, 2), Fraction(-13, 6))

# 被覆 x ↦ α の分岐点 x = ±i√i
I_SQRT_I = I * SQRT_I

# 曲線 y² = x⁵ − x の分岐点（有限部分）
CURVE_BRANCH_POINTS = (0, 1, -1, 1j, -1j)


def _lift(value, like):
    """like が CycloQ なら厳密値のまま、そうでなければ mpmath へ"""
    if isinstance(like, CycloQ):
        return CycloQ.coerce(value)
    if isinstance(value, CycloQ):
        return value.to_mpc()
    return mp.mpc(value)


def fourth_root(n):
    """正の実4乗根 ⁴√n"""
    return mp.root(mp.mpf(n), 4)


def wp_prime_aleph():
    """℘′(ℵ) = ⁴√32·(7+5√2)·i"""
    return fourth_root(32) * (7 + 5 * mp.sqrt(2)) * mp.j


# =============================================================================
# ヤコビの被覆
# =============================================================================

def _field_sqrt(value):
    """ℚ(i,√2) 内にあれば厳密な平方根、なければ mpmath の主枝"""
    if isinstance(value, CycloQ):
        try:
            return value.sqrt()
        except ValidationError:
            return mp.sqrt(value.to_mpc())
    return mp.sqrt(mp.mpc(value))


def jacobi_k(a, b) -> tuple:
    """
    2つのトーラスのモジュラス k±

    Args:
        a, b: 曲線のパラメータ（CycloQ または複素数）

    Returns:
        tuple: (k_plus, k_minus)。√a, √b が体内にあれば CycloQ

    Raises:
        ValidationError: (a−1)(b−1) = 0 または ab = 0
    """
    exact = isinstance(a, CycloQ) and isinstance(b, CycloQ)
    if not exact:
        a, b = _lift(a, 0), _lift(b, 0)
    one = ONE if exact else 1
    denominator = (a - one) * (b - one)
    product = a * b
    if (denominator.is_zero() if exact else denominator == 0) or (product.is_zero() if exact else product == 0):
        raise ValidationError(f"(a−1)(b−1)·ab = 0 です: a={a}, b={b}")

    sa, sb = _field_sqrt(a), _field_sqrt(b)
    if isinstance(sa, CycloQ) and isinstance(sb, CycloQ):
        return -(sa + sb) ** 2 / denominator, -(sa - sb) ** 2 / denominator
    sa, sb = _lift(sa, 0), _lift(sb, 0)
    denominator = _lift(denominator, 0)
    return -(sa + sb) ** 2 / denominator, -(sa - sb) ** 2 / denominator


def weierstrass_roots(k) -> tuple:
    """
    z = kλ − (k+1)/3 による標準形の根 ((2k−1)/3, −(k+1)/3, (2−k)/3)

    バーンサイドの場合は (e, e′, e″) の順になる。
    """
    return (2 * k - 1) / 3, -(k + 1) / 3, (2 - k) / 3


def invariants_from_roots(roots) -> tuple:
    """Σe = 0 の根から (g₂, g₃) = (2Σe², 4e₁e₂e₃)"""
    e1, e2, e3 = roots
    return 2 * (e1 * e1 + e2 * e2 + e3 * e3), 4 * e1 * e2 * e3


class JacobiCover:
    """
    ヤコビの置換 λ(x) による y² = x(x−1)(x−a)(x−b)(x−ab) の被覆

    機能:
    1. k± と各トーラスの (g₂, g₃)
    2. λ(x) とその x 微分
    3. 正則微分の還元 dλ/μ = c·(x ∓ √a√b)dx/y の数値確認
    """

    def __init__(self, a, b):
        if not (isinstance(a, CycloQ) and isinstance(b, CycloQ)):
            a, b = _lift(a, 0), _lift(b, 0)
        self.a = a
        self.b = b
        self.k_plus, self.k_minus = jacobi_k(a, b)
        sa, sb = _field_sqrt(a), _field_sqrt(b)
        if isinstance(sa, CycloQ) and isinstance(sb, CycloQ):
            self.sqrt_ab = sa * sb
        else:
            self.sqrt_ab = _lift(sa, 0) * _lift(sb, 0)

    def k(self, sign: int = 1):
        return self.k_plus if sign > 0 else self.k_minus

    def invariants(self, sign: int = 1) -> tuple:
        return invariants_from_roots(weierstrass_roots(self.k(sign)))

    def curve_polynomial(self, x):
        a, b = _lift(self.a, x), _lift(self.b, x)
        return x * (x - 1) * (x - a) * (x - b) * (x - a * b)

    def lambda_of_x(self, x):
        a, b = _lift(self.a, x), _lift(self.b, x)
        return (1 - a) * (1 - b) * x / ((x - a) * (x - b))

    def lambda_x(self, x):
        """dλ/dx = (1−a)(1−b)(ab − x²) / ((x−a)(x−b))²"""
        a, b = _lift(self.a, x), _lift(self.b, x)
        return (1 - a) * (1 - b) * (a * b - x * x) / ((x - a) * (x - b)) ** 2

    def reduction_residual(self, points, sign: int = 1):
        """
        (dλ/dx)²·y² / (μ²·(x ∓ √a√b)²) = (1−a)(1−b) の最大相対残差

        平方で比べるので平方根の枝に依存しない。

        Args:
            points: x の標本点
            sign: +1 なら k₊ と (x − √a√b)、−1 なら k₋ と (x + √a√b)
        """
        k = _lift(self.k(sign), 0)
        s = _lift(self.sqrt_ab, 0)
        a, b = _lift(self.a, 0), _lift(self.b, 0)
        expected = (1 - a) * (1 - b)
        worst = mp.mpf(0)
        for x in points:
            x = mp.mpc(x)
            lam = self.lambda_of_x(x)
            mu_squared = lam * (lam - 1) * (k * lam - 1)
            ratio = self.lambda_x(x) ** 2 * self.curve_polynomial(x) / (mu_squared * (x - sign * s) ** 2)
            worst = max(worst, abs(ratio - expected) / abs(expected))
        return worst


BURNSIDE_COVER_PARAMS = (CycloQ(-1), I)


# =============================================================================
# バーンサイドのトーラス
# =============================================================================

class BurnsideTorus:
    """
    k₊ = (1+√2)/2 のトーラス（g₂ = 5/3, g₃ = −(7/27)√2）

    Attributes:
        g2, g3, e, e_prime, e_dprime: 厳密値（CycloQ）
        omega, omega_prime: 半周期 ω = π√2·η̂²(√2i), ω′ = iω/√2
        lp: 格子パラメータ
        aleph: 虚軸上 (0, ω′) の点で ℘(ℵ) = −7/2 − (13/6)√2 となるもの
        aleph_oriented: ±ℵ のうち ℘′ = ⁴√32(7+5√2)i となる代表（方程式の ζ 項はこちらで書く）
    """

    def __init__(self):
        self.prec = mp.prec
        self.k = K_PLUS
        self.e, self.e_prime, self.e_dprime = weierstrass_roots(self.k)
        self.g2, self.g3 = invariants_from_roots((self.e, self.e_prime, self.e_dprime))

        self.omega = mp.pi * mp.sqrt(2) * dedekind_eta(mp.sqrt(2) * mp.j) ** 2
        self.omega_prime = mp.j * self.omega / mp.sqrt(2)
        self.lp = lattice_params(HalfPeriods(self.omega, self.omega_prime))

        self.aleph = find_aleph(self)
        target = wp_prime_aleph()
        self.wp_prime_at_aleph = wp_family(self.aleph, self.lp)[3]
        if abs(self.wp_prime_at_aleph - target) <= abs(self.wp_prime_at_aleph + target):
            self.aleph_oriented = self.aleph
        else:
            self.aleph_oriented = -self.aleph
        logger.debug(
            f"バーンサイドのトーラス: ω={mp.nstr(self.omega, 20)}, ℵ={mp.nstr(self.aleph, 15)}, "
            f"向き付きの ℵ={mp.nstr(self.aleph_oriented, 15)}"
        )

    @property
    def omega_dprime(self):
        return -self.omega - self.omega_prime

    @property
    def aleph_mirror(self):
        """−ℵ の基本セル内の代表 2ω′ − ℵ"""
        return 2 * self.omega_prime - self.aleph

    def wp(self, alpha):
        return wp_family(alpha, self.lp)[2]

    def wp_prime(self, alpha):
        return wp_family(alpha, self.lp)[3]

    def zeta(self, alpha):
        return wp_family(alpha, self.lp)[1]

    def klein_j(self):
        """J(ω′/ω)（ω′/ω = i/√2 は −1/τ で √2·i に移る）"""
        return klein_j(-1 / self.lp.half_periods.tau)

    def to_dict(self, digits: int = 30) -> dict:
        return {
            "k": str(self.k),
            "g2": str(self.g2),
            "g3": str(self.g3),
            "e": str(self.e),
            "e_prime": str(self.e_prime),
            "e_dprime": str(self.e_dprime),
            "omega": mp.nstr(self.omega, digits),
            "omega_prime": mp.nstr(self.omega_prime, digits),
            "aleph": mp.nstr(self.aleph, digits),
            "aleph_mirror": mp.nstr(self.aleph_mirror, digits),
            "aleph_oriented": mp.nstr(self.aleph_oriented, digits),
            "wp_aleph": str(WP_ALEPH),
            "wp_prime_aleph": mp.nstr(self.wp_prime_at_aleph, digits),
            "J": mp.nstr(self.klein_j(), digits),
        }


_TORUS_CACHE = {}


def burnside_torus() -> BurnsideTorus:
    """現在の精度のトーラス（精度ごとに1度だけ計算）"""
    torus = _TORUS_CACHE.get(mp.prec)
    if torus is None:
        torus = BurnsideTorus()
        _TORUS_CACHE[mp.prec] = torus
    return torus


def omega_by_modular_inversion():
    """ω = ⁴√((12/5)·g₂(√2·i))（g₂ は半周期 (1, τ) のもの）"""
    return mp.root(mp.mpf(12) / 5 * g2_of_tau(mp.sqrt(2) * mp.j), 4)


def find_aleph(torus: BurnsideTorus):
    """
    ℘(ℵ) = −7/2 − (13/6)√2 の解のうち虚軸上 (0, ω′) にあるもの

    Raises:
        ConvergenceError: 解が虚軸上に見つからない
    """
    v = WP_ALEPH.to_mpc()
    # ℘(z) ≈ z⁻² から初期値
    hint = mp.j / mp.sqrt(-mp.re(v))
    z = wp_inverse(v, torus.lp, hint)
    if mp.im(z) < 0:
        z = -z
    if abs(mp.re(z)) > mp.ldexp(1, -mp.prec // 3) or not 0 < mp.im(z) < mp.im(torus.omega_prime):
        raise ConvergenceError(
            f"ℵ が虚軸上の区間 (0, ω′) に見つかりません: z={mp.nstr(z, 15)}",
            error_code="newton",
        )
    return mp.mpc(0, mp.im(z))


def rescaling_residual(z):
    """
    ℘(z; 5/3, 7√2/27) = (√2/6)·℘(√(√2/6)·z; 30, 28) の相対残差
    """
    z = mp.mpc(z)
    scale = mp.sqrt(2) / 6
    lhs = wp_from_invariants(z, mp.mpf(5) / 3, 7 * mp.sqrt(2) / 27)
    rhs = scale * wp_from_invariants(mp.sqrt(scale) * z, 30, 28)
    return abs(lhs - rhs) / max(mp.mpf(1), abs(lhs))


def lower_sign_lattice():
    """g₃ = +(7/27)√2 のトーラスの格子"""
    return lattice_params(half_periods_from_invariants(mp.mpf(5) / 3, 7 * mp.sqrt(2) / 27))


# =============================================================================
# 被覆の式 R(α, x) = 0
# =============================================================================

def _check_cover_pole(x):
    if isinstance(x, CycloQ):
        if x == I or x == CycloQ(-1):
            raise DomainError(f"x = {x} は ℘(α) の極です", error_code="pole", guard="x ∉ {i, −1}")
        return
    radius = mp.ldexp(1, -mp.prec // 4)
    for pole in (mp.j, -1):
        if abs(x - pole) < radius:
            raise DomainError(
                f"x = {mp.nstr(x, 12)} は ℘(α) の極に近すぎます",
                error_code="pole",
                guard="|x − i|, |x + 1| > 2^(−P/4)",
            )


def cover_wp_of_x(x, torus: BurnsideTorus = None):
    """
    ℘(α) = e′ + (1+3e)/(x−i) − i(1+3e)/(x+1)

    CycloQ の x には厳密値を返す。

    Raises:
        DomainError: x ∈ {i, −1}
    """
    if not isinstance(x, CycloQ):
        x = mp.mpc(x)
    _check_cover_pole(x)
    e, e_prime = weierstrass_roots(K_PLUS)[:2]
    c = _lift(1 + 3 * e, x)
    i = _lift(I, x)
    return _lift(e_prime, x) + c / (x - i) - i * c / (x + 1)


def lambda_of_x(x):
    """バーンサイドの場合の λ(x) = 2(1−i)x/((x+1)(x−i)) = 2/(x−i) − 2i/(x+1)"""
    if not isinstance(x, CycloQ):
        x = mp.mpc(x)
    _check_cover_pole(x)
    i = _lift(I, x)
    return 2 / (x - i) - 2 * i / (x + 1)


def lambda_derivatives(x) -> tuple:
    """(λ_x, λ_xx, λ_xxx)"""
    x = mp.mpc(x)
    a, b = x - mp.j, x + 1
    return (
        -2 / a ** 2 + 2 * mp.j / b ** 2,
        4 / a ** 3 - 4 * mp.j / b ** 3,
        -12 / a ** 4 + 12 * mp.j / b ** 4,
    )


def wp_via_lambda(x):
    """λ を経由した z = kλ − (k+1)/3（cover_wp_of_x と一致する）"""
    k = _lift(K_PLUS, x if isinstance(x, CycloQ) else 0)
    return k * lambda_of_x(x) - (k + 1) / 3


def lambda_of_wp(wp):
    """λ = 2(√2−1)℘ + (2√2−1)/3"""
    return (wp + (K_PLUS + 1).to_mpc() / 3) / K_PLUS.to_mpc()


def x_roots_of_wp(wp, torus: BurnsideTorus = None) -> tuple:
    """
    x² = (i−1)(℘ + e′ − 2e)/(℘ − e′)·x + i の2根（積は −i）

    Raises:
        DomainError: ℘ = e′（x ∈ {0, ∞}）
    """
    wp = mp.mpc(wp)
    e, e_prime = (r.to_mpc() for r in weierstrass_roots(K_PLUS)[:2])
    if abs(wp - e_prime) < mp.ldexp(1, -mp.prec // 4):
        raise DomainError(
            "℘(α) = e′ の近傍です（x = 0 または ∞）",
            error_code="pole",
            guard="|℘ − e′| > 2^(−P/4)",
        )
    p = (mp.j - 1) * (wp + e_prime - 2 * e) / (wp - e_prime)
    root = mp.sqrt(p * p + 4 * mp.j)
    return (p + root) / 2, (p - root) / 2


def y_from_cover(x, wp_prime):
    """
    ℘′(α) = −(6e+2)/√(1+i)·(x + i√i)y/((x−i)²(x+1)²) を y について解く

    符号は dα = (x − i√i)dx/(√(1+i)·y) の向きに合わせたもの。
    """
    x = mp.mpc(x)
    e = weierstrass_roots(K_PLUS)[0].to_mpc()
    return -wp_prime * mp.sqrt(1 + mp.j) * (x - mp.j) ** 2 * (x + 1) ** 2 / ((6 * e + 2) * (x + I_SQRT_I.to_mpc()))
