"""
トーラス上の可解なフックス型方程式

    Ξ_αα = ½Q(α)·Ξ

λ 平面の5点方程式を λ = 2(√2−1)℘(α) + (2√2−1)/3 で引き戻す。
BURNSIDE は x⁵ − x の Q(x)、WHITTAKER は予想式の Q(x)（= ¾ 倍）から出発する。
"""
import logging
from fractions import Fraction

from mpmath import mp

import config
from burnside.schwarz import schwarz_Q
from elliptic.weierstrass import HalfPeriods, lattice_params, nearest_translate, wp_family
from numeric.cyclo import CycloQ, GAMMA
from utils.error_handler import DomainError, ValidationError
from .cover import BurnsideTorus, burnside_torus, fourth_root, lambda_derivatives

logger = logging.getLogger(__name__)

BURNSIDE = "BURNSIDE"
WHITTAKER = "WHITTAKER"
VARIANTS = (BURNSIDE, WHITTAKER)

# x 平面の Q にかける係数
X_Q_FACTOR = {BURNSIDE: Fraction(1), WHITTAKER: Fraction(3, 4)}

PUNCTURE = "puncture"
ELLIPTIC_ORDER_2 = "elliptic-order-2"
LOCAL_COEFFICIENT = {PUNCTURE: Fraction(-1, 4), ELLIPTIC_ORDER_2: Fraction(-3, 16)}

# λ = A℘ + B
LAMBDA_SCALE = 2 * GAMMA
LAMBDA_SHIFT = CycloQ(Fraction(-1, 3), Fraction(2, 3))

# λ² + 4λ − 4 = 0 の根 −2 ± 2√2
LAMBDA_ELLIPTIC = (CycloQ(-2, 2), CycloQ(-2, -2))


def _check_variant(variant: str):
    if variant not in VARIANTS:
        raise ValidationError(f"未知の方程式: {variant}（{', '.join(VARIANTS)}）")


# =============================================================================
# λ 平面
# =============================================================================

def _lambda_numerator(lam):
    return lam ** 6 + 4 * lam ** 5 + 16 * lam ** 4 - 56 * lam ** 3 + 68 * lam ** 2 - 48 * lam + 16


def lambda_fuchsian_Q(lam):
    """
    Q(λ) = −½(λ⁶ + 4λ⁵ + 16λ⁴ − 56λ³ + 68λ² − 48λ + 16) / (λ²(λ−1)²(λ² + 4λ − 4)²)

    Raises:
        DomainError: λ が特異点 {0, 1, −2 ± 2√2} に近い
    """
    if not isinstance(lam, CycloQ):
        lam = mp.mpc(lam)
    quadratic = lam * lam + 4 * lam - 4
    denominator = lam * lam * (lam - 1) ** 2 * quadratic * quadratic
    if (denominator.is_zero() if isinstance(lam, CycloQ) else abs(denominator) < mp.ldexp(1, -mp.prec // 2)):
        raise DomainError(
            f"λ = {lam} は特異点です",
            error_code="pole",
            guard="λ ∉ {0, 1, −2 ± 2√2}",
        )
    return -_lambda_numerator(lam) / (2 * denominator)


def lambda_local_coefficients() -> dict:
    """
    Q(λ)/2 の (λ − λⱼ)⁻² の係数（厳密）

    Returns:
        dict: 特異点のラベル → 係数
    """
    result = {}
    finite = [("0", CycloQ(0)), ("1", CycloQ(1)), ("-2+2√2", LAMBDA_ELLIPTIC[0]), ("-2-2√2", LAMBDA_ELLIPTIC[1])]
    for label, point in finite:
        # 分母から (λ − λⱼ)² を除いた残り
        factors = [p for _, p in finite if p != point]
        reduced = CycloQ(1)
        for p in factors:
            reduced = reduced * (point - p) ** 2
        coefficient = -_lambda_numerator(point) / (4 * reduced)
        result[label] = coefficient.coords[0] if coefficient.is_rational() else coefficient
    # λ → ∞ で Q ∼ −½λ⁻²
    result["∞"] = Fraction(-1, 4)
    return result


def _schwarzian_lambda_x(x):
    """{λ, x}"""
    l1, l2, l3 = lambda_derivatives(x)
    return l3 / l1 - mp.mpf(3) / 2 * (l2 / l1) ** 2


def lambda_construction_Q(x, variant: str = BURNSIDE):
    """
    x 平面の Q から変数変換で作った λ 平面の Q

        Q_λ = (Q_x + {λ,x}) / λ_x²

    Raises:
        DomainError: λ_x ≈ 0（x² = −i）
    """
    _check_variant(variant)
    x = mp.mpc(x)
    l1 = lambda_derivatives(x)[0]
    if abs(l1) < mp.ldexp(1, -mp.prec // 4):
        raise DomainError(
            f"x = {mp.nstr(x, 12)} は λ の臨界点です",
            error_code="branch_value",
            guard="x² ≠ −i",
        )
    factor = X_Q_FACTOR[variant]
    q_x = mp.mpf(factor.numerator) / factor.denominator * schwarz_Q(x)
    return (q_x + _schwarzian_lambda_x(x)) / l1 ** 2


def x_of_lambda(lam) -> tuple:
    """λx² + (1−i)(λ−2)x − iλ = 0 の2根"""
    lam = mp.mpc(lam)
    b = (1 - mp.j) * (lam - 2)
    root = mp.sqrt(b * b + 4 * mp.j * lam * lam)
    return (-b + root) / (2 * lam), (-b - root) / (2 * lam)


# =============================================================================
# トーラス上の方程式
# =============================================================================

class FuchsianTorusEq:
    """
    トーラス上の方程式 Ξ_αα = ½Q(α)Ξ

    機能:
    1. ζ 形と 1/(℘(α) − ℘(ℵ)) 形の2つの表示
    2. λ 平面からの引き戻しによる独立な計算
    3. 楕円性と局所ローラン係数の確認

    ℵ は ℘′(ℵ) = ⁴√32(7+5√2)i となる代表（aleph_oriented）で書く。

    Args:
        variant: BURNSIDE または WHITTAKER
        torus: 省略時は現在の精度のトーラス
    """

    def __init__(self, variant: str = BURNSIDE, torus: BurnsideTorus = None):
        _check_variant(variant)
        self.variant = variant
        self.torus = torus or burnside_torus()
        self.aleph = self.torus.aleph_oriented
        self.wp_aleph = self.torus.wp(self.aleph)
        self.zeta_aleph = self.torus.zeta(self.aleph)
        self.root2 = mp.sqrt(2)
        logger.debug(f"FuchsianTorusEq初期化完了: {variant}")

    # ---------------------------------------------------------------------
    # 構造データ
    # ---------------------------------------------------------------------

    @property
    def singular_points(self) -> list:
        """(ラベル, 位置, 種類) のリスト"""
        t = self.torus
        elliptic = [("ℵ", self.aleph, ELLIPTIC_ORDER_2), ("−ℵ", -self.aleph, ELLIPTIC_ORDER_2)]
        if self.variant == WHITTAKER:
            return elliptic
        punctures = [("0", mp.mpc(0), PUNCTURE), ("ω", t.omega, PUNCTURE), ("ω′", t.omega_prime, PUNCTURE)]
        return punctures + elliptic

    @property
    def zeta_coeffs(self) -> dict:
        """
        ζ(α ∓ ℵ) の係数（有理数部分と無理数部分のラベル、数値）
        """
        if self.variant == BURNSIDE:
            rational, label = Fraction(9, 64), "⁴√8·i"
            value = rational.numerator * fourth_root(8) * mp.j / rational.denominator
        else:
            rational, label = Fraction(3, 16), "32^(−1/4)·i"
            value = rational.numerator * mp.j / (rational.denominator * fourth_root(32))
        return {
            "ℵ": {"rational": rational, "radical": label, "value": value},
            "−ℵ": {"rational": -rational, "radical": label, "value": -value},
        }

    @property
    def constant_term(self):
        """
        BURNSIDE: (9/32)(⁴√8·i·ζ(ℵ) + 2√2 + 2)
        WHITTAKER: (3/16)(2^(−1/4)·i·ζ(ℵ) + √2 + 1)
        """
        if self.variant == BURNSIDE:
            return mp.mpf(9) / 32 * (fourth_root(8) * mp.j * self.zeta_aleph + 2 * self.root2 + 2)
        return mp.mpf(3) / 16 * (mp.j * self.zeta_aleph / fourth_root(2) + self.root2 + 1)

    def _check_regular(self, alpha):
        radius = mp.mpf(config.TAU_GUARD_RADIUS)
        for label, point, _ in self.singular_points:
            nearest = nearest_translate(point, alpha, self.torus.lp)
            if abs(alpha - nearest) < radius:
                raise DomainError(
                    f"α = {mp.nstr(alpha, 12)} は特異点 {label} に近すぎます",
                    error_code="near_lattice",
                    guard=f"|α − αⱼ| ≥ {mp.nstr(radius, 3)}",
                )

    # ---------------------------------------------------------------------
    # Q(α)/2
    # ---------------------------------------------------------------------

    def _wp(self, alpha):
        return wp_family(alpha, self.torus.lp)[2]

    def _zeta(self, alpha):
        return wp_family(alpha, self.torus.lp)[1]

    def half_Q(self, alpha, form: str = "zeta"):
        """
        ½Q(α)

        Args:
            alpha: 評価点
            form: "zeta"（ζ(α ∓ ℵ) を使う形）または "wp"（1/(℘(α) − ℘(ℵ)) の形）

        Raises:
            DomainError: α が特異点に近い
            ValidationError: 未知の形
        """
        if form not in ("zeta", "wp"):
            raise ValidationError(f"未知の形: {form}（zeta, wp）")
        alpha = mp.mpc(alpha)
        self._check_regular(alpha)
        t = self.torus
        a = self.aleph
        elliptic = self._wp(alpha - a) + self._wp(alpha + a)
        if self.variant == BURNSIDE:
            punctures = self._wp(alpha) + self._wp(alpha - t.omega) + self._wp(alpha - t.omega_prime)
            if form == "zeta":
                c = fourth_root(8) * mp.j
                return (
                    -punctures / 4
                    - mp.mpf(3) / 16 * elliptic
                    + mp.mpf(9) / 64 * c * (self._zeta(alpha - a) - self._zeta(alpha + a))
                    + self.constant_term
                )
            inner = 3 * (7 + 5 * self.root2) / (self._wp(alpha) - self.wp_aleph) - 3 * self.root2 - 3
            return -punctures / 4 - mp.mpf(3) / 16 * (elliptic + inner)

        if form == "zeta":
            c = mp.j / fourth_root(32)
            inner = (
                -c * self._zeta(alpha - a)
                + c * self._zeta(alpha + a)
                - (mp.j * self.zeta_aleph / fourth_root(2) + self.root2 + 1)
            )
        else:
            inner = (7 + 5 * self.root2) / (self._wp(alpha) - self.wp_aleph) - self.root2 - 1
        return -mp.mpf(3) / 16 * (elliptic + inner)

    def construction_half_Q(self, alpha):
        """
        λ 平面からの引き戻し ½(λ_α²·Q(λ) − {λ, α})（λ_α = 2(√2−1)℘′(α)）

        Q(λ) は x 平面の Q を x(λ) の一方の根で変換したもの。
        """
        alpha = mp.mpc(alpha)
        self._check_regular(alpha)
        _, _, wp, wp_prime = wp_family(alpha, self.torus.lp)
        g2 = self.torus.g2.to_mpc()
        scale = LAMBDA_SCALE.to_mpc()
        lam = scale * wp + LAMBDA_SHIFT.to_mpc()
        x = x_of_lambda(lam)[0]
        q_lambda = lambda_construction_Q(x, self.variant)
        wp2 = 6 * wp * wp - g2 / 2
        wp3 = 12 * wp * wp_prime
        schwarzian_alpha = wp3 / wp_prime - mp.mpf(3) / 2 * (wp2 / wp_prime) ** 2
        return (scale ** 2 * wp_prime ** 2 * q_lambda - schwarzian_alpha) / 2

    # ---------------------------------------------------------------------
    # 確認
    # ---------------------------------------------------------------------

    def forms_residual(self, alpha):
        """ζ 形と ℘ 形の相対差"""
        a = self.half_Q(alpha, "zeta")
        b = self.half_Q(alpha, "wp")
        return abs(a - b) / max(mp.mpf(1), abs(a))

    def construction_residual(self, alpha):
        """閉じた形と引き戻しの相対差"""
        a = self.half_Q(alpha, "zeta")
        b = self.construction_half_Q(alpha)
        return abs(a - b) / max(mp.mpf(1), abs(a))

    def ellipticity_residual(self, alpha):
        """max |Q(α + 2ω) − Q(α)|, |Q(α + 2ω′) − Q(α)| の相対値"""
        t = self.torus
        base = self.half_Q(alpha)
        worst = mp.mpf(0)
        for shift in (2 * t.omega, 2 * t.omega_prime):
            worst = max(worst, abs(self.half_Q(mp.mpc(alpha) + shift) - base) / max(mp.mpf(1), abs(base)))
        return worst

    def laurent_coefficients(self, center, radius=None, nodes: int = 96) -> tuple:
        """
        ½Q の center での (α − center)⁻², (α − center)⁻¹ の係数

        円周上の台形則 (1/N)Σ f(c + re^{iθ})·r^k e^{ikθ}（k = 2, 1）。
        """
        radius = mp.mpf(radius) if radius is not None else mp.mpf("0.08")
        center = mp.mpc(center)
        a2 = mp.mpc(0)
        a1 = mp.mpc(0)
        for k in range(nodes):
            w = radius * mp.expjpi(mp.mpf(2 * k) / nodes)
            value = self.half_Q(center + w)
            a2 += value * w * w
            a1 += value * w
        return a2 / nodes, a1 / nodes

    def local_coefficient_table(self, radius=None, nodes: int = 96) -> list:
        """
        各特異点の局所係数と期待値

        Returns:
            list: {"point", "type", "quadratic", "expected_quadratic", "residue", "expected_residue"}
        """
        residues = self.zeta_coeffs
        table = []
        for label, point, kind in self.singular_points:
            a2, a1 = self.laurent_coefficients(point, radius, nodes)
            expected_residue = residues[label]["value"] if label in residues else mp.mpc(0)
            expected = LOCAL_COEFFICIENT[kind]
            table.append({
                "point": label,
                "type": kind,
                "quadratic": a2,
                "expected_quadratic": expected,
                "residue": a1,
                "expected_residue": expected_residue,
            })
        return table

    def constant_term_residual(self, alpha):
        """
        ℘ 形から特異部分を引いた残りと constant_term の差

        ζ(α−ℵ) − ζ(α+ℵ) + 2ζ(ℵ) = ℘′(ℵ)/(℘(α) − ℘(ℵ)) を使う組み立ての確認。
        """
        alpha = mp.mpc(alpha)
        t = self.torus
        a = self.aleph
        singular = -mp.mpf(3) / 16 * (self._wp(alpha - a) + self._wp(alpha + a))
        if self.variant == BURNSIDE:
            c = mp.mpf(9) / 64 * fourth_root(8) * mp.j
            singular -= (self._wp(alpha) + self._wp(alpha - t.omega) + self._wp(alpha - t.omega_prime)) / 4
        else:
            c = mp.mpf(3) / 16 * mp.j / fourth_root(32)
        singular += c * (self._zeta(alpha - a) - self._zeta(alpha + a))
        assembled = self.half_Q(alpha, "wp") - singular
        return abs(assembled - self.constant_term) / max(mp.mpf(1), abs(self.constant_term))

    def to_dict(self, digits: int = 20) -> dict:
        return {
            "variant": self.variant,
            "aleph": mp.nstr(self.aleph, digits),
            "singular_points": [
                {"point": label, "alpha": mp.nstr(point, digits), "type": kind}
                for label, point, kind in self.singular_points
            ],
            "zeta_coeffs": {
                label: f"{entry['rational']}·{entry['radical']}" for label, entry in self.zeta_coeffs.items()
            },
            "constant_term": mp.nstr(self.constant_term, digits),
        }


# =============================================================================
# 実数化した表示
# =============================================================================

def _renormalized_lattice():
    return lattice_params(HalfPeriods(1, mp.sqrt(2) * mp.j))


def renormalized_constants(torus: BurnsideTorus = None) -> dict:
    """
    α = ω′α̃ とした格子 (1, √2·i) での定数

    Returns:
        dict: M = 2^(1/4)ω（= ⁴√8·π·η̂²(√2i)）、ℵ̃ = ℵ/ω′、
              zeta_aleph = ζ̃(ℵ̃)（ℵ = 0.3907i の代表）、
              zeta_aleph_oriented = ζ̃(ℵ̃)（方程式で使う向きの代表）
    """
    torus = torus or burnside_torus()
    lp = _renormalized_lattice()
    aleph = mp.re(torus.aleph / torus.omega_prime)
    aleph_oriented = mp.re(torus.aleph_oriented / torus.omega_prime)
    return {
        "M": fourth_root(2) * torus.omega,
        "aleph": aleph,
        "aleph_oriented": aleph_oriented,
        "zeta_aleph": mp.re(wp_family(aleph, lp)[1]),
        "zeta_aleph_oriented": mp.re(wp_family(aleph_oriented, lp)[1]),
    }


def renormalized_half_Q(alpha_tilde, torus: BurnsideTorus = None):
    """
    実係数の表示

        −¼(℘̃(α̃) + ℘̃(α̃−1) + ℘̃(α̃−μ)) − (3/16)(℘̃(α̃−ℵ̃) + ℘̃(α̃+ℵ̃))
        − (9/64)M(ζ̃(α̃−ℵ̃) − ζ̃(α̃+ℵ̃)) − (9/32)M(ζ̃(ℵ̃) + (2^(−1/2) + 1)M)

    （μ = √2·i, ℘̃, ζ̃ は格子 (1, μ)）。値は ω′²·½Q(ω′α̃) に等しい。
    """
    constants = renormalized_constants(torus)
    lp = _renormalized_lattice()
    m = constants["M"]
    a = constants["aleph_oriented"]
    mu = mp.sqrt(2) * mp.j
    z = mp.mpc(alpha_tilde)

    def wp(u):
        return wp_family(u, lp)[2]

    def zeta(u):
        return wp_family(u, lp)[1]

    return (
        -(wp(z) + wp(z - 1) + wp(z - mu)) / 4
        - mp.mpf(3) / 16 * (wp(z - a) + wp(z + a))
        - mp.mpf(9) / 64 * m * (zeta(z - a) - zeta(z + a))
        - mp.mpf(9) / 32 * m * (constants["zeta_aleph_oriented"] + (1 / mp.sqrt(2) + 1) * m)
    )


def renormalized_residual(alpha_tilde, torus: BurnsideTorus = None):
    """|renormalized_half_Q(α̃) − ω′²·½Q(ω′α̃)| の相対値"""
    torus = torus or burnside_torus()
    equation = FuchsianTorusEq(BURNSIDE, torus)
    expected = torus.omega_prime ** 2 * equation.half_Q(torus.omega_prime * mp.mpc(alpha_tilde))
    value = renormalized_half_Q(alpha_tilde, torus)
    return abs(value - expected) / max(mp.mpf(1), abs(expected))
