"""
ワイエルシュトラス関数の多倍長評価
σ, ζ, ℘, ℘′ をテータ関数（ノーム級数）経由で計算する
"""
import logging

from mpmath import mp

from utils.error_handler import DomainError

logger = logging.getLogger(__name__)

# ノームの退化判定
NOME_GUARD = mp.mpf(1) - mp.mpf(2) ** -16


class HalfPeriods:
    """
    半周期 (ω, ω′)

    Im(ω′/ω) > 0 を要求する。
    """

    def __init__(self, omega, omega_prime):
        self.omega = mp.mpc(omega)
        self.omega_prime = mp.mpc(omega_prime)
        if self.omega == 0 or mp.im(self.omega_prime / self.omega) <= 0:
            raise DomainError(
                f"Im(ω′/ω) > 0 が必要です: ω={self.omega}, ω′={self.omega_prime}",
                error_code="degenerate_lattice",
                guard="Im τ > 0",
            )

    @property
    def tau(self):
        return self.omega_prime / self.omega

    def scaled(self, factor) -> "HalfPeriods":
        return HalfPeriods(self.omega * factor, self.omega_prime * factor)

    def __repr__(self):
        return f"HalfPeriods({mp.nstr(self.omega, 12)}, {mp.nstr(self.omega_prime, 12)})"


class LatticeParams:
    """
    格子の不変量と準周期

    機能:
    1. g₂, g₃ とその判別式
    2. η = ζ(ω), η′ = ζ(ω′)（ルジャンドル関係を満たす）
    3. e = ℘(ω), e′ = ℘(ω′), e″ = ℘(ω+ω′)
    4. テータ評価に使うノーム q = exp(iπτ) と θ₁′(0)

    生成時の mp.prec を保持し、より高い精度で使われた場合は再計算する。
    """

    def __init__(self, half_periods: HalfPeriods):
        self.half_periods = half_periods
        self.prec = mp.prec
        omega, tau = half_periods.omega, half_periods.tau

        q = mp.exp(mp.j * mp.pi * tau)
        if abs(q) >= NOME_GUARD:
            raise DomainError(
                f"ノームが単位円に近すぎます: |q|={mp.nstr(abs(q), 8)}",
                error_code="degenerate_lattice",
                guard="|q| < 1 − ε",
            )
        self.q = q

        theta2 = mp.jtheta(2, 0, q)
        theta4 = mp.jtheta(4, 0, q)
        self.theta1_d1 = mp.jtheta(1, 0, q, 1)
        theta1_d3 = mp.jtheta(1, 0, q, 3)

        c = mp.pi / (2 * omega)
        t2, t4 = theta2 ** 4, theta4 ** 4
        self.e = c ** 2 / 3 * (t2 + 2 * t4)
        self.e_dprime = c ** 2 / 3 * (t2 - t4)
        self.e_prime = -c ** 2 / 3 * (2 * t2 + t4)

        self.eta = -mp.pi ** 2 * theta1_d3 / (12 * omega * self.theta1_d1)
        # ルジャンドル関係 ηω′ − η′ω = πi/2
        self.eta_prime = self.eta * tau - mp.pi * mp.j / (2 * omega)

        self.g2 = 2 * (self.e ** 2 + self.e_prime ** 2 + self.e_dprime ** 2)
        self.g3 = 4 * self.e * self.e_prime * self.e_dprime

    @property
    def omega(self):
        return self.half_periods.omega

    @property
    def omega_prime(self):
        return self.half_periods.omega_prime

    @property
    def discriminant(self):
        return self.g2 ** 3 - 27 * self.g3 ** 2

    def legendre_residual(self):
        return abs(self.eta * self.omega_prime - self.eta_prime * self.omega - mp.pi * mp.j / 2)

    def refreshed(self) -> "LatticeParams":
        """現在の精度より低い精度で作られていれば再計算"""
        if mp.prec > self.prec:
            return LatticeParams(self.half_periods)
        return self

    def to_dict(self, digits: int = 30) -> dict:
        return {
            "omega": mp.nstr(self.omega, digits),
            "omega_prime": mp.nstr(self.omega_prime, digits),
            "g2": mp.nstr(self.g2, digits),
            "g3": mp.nstr(self.g3, digits),
            "eta": mp.nstr(self.eta, digits),
            "eta_prime": mp.nstr(self.eta_prime, digits),
            "e": mp.nstr(self.e, digits),
            "e_prime": mp.nstr(self.e_prime, digits),
            "e_dprime": mp.nstr(self.e_dprime, digits),
        }


def lattice_params(hp: HalfPeriods) -> LatticeParams:
    """
    半周期から不変量・準周期を計算

    Args:
        hp: 半周期

    Returns:
        LatticeParams

    Raises:
        DomainError: 退化した格子
    """
    lp = LatticeParams(hp)
    logger.debug(f"格子パラメータ計算: {hp} g2={mp.nstr(lp.g2, 10)} g3={mp.nstr(lp.g3, 10)}")
    return lp


def _as_lattice(lattice) -> LatticeParams:
    if isinstance(lattice, HalfPeriods):
        return LatticeParams(lattice)
    return lattice.refreshed()


def lattice_coordinates(z, lp: LatticeParams):
    """z = 2ω·s + 2ω′·t となる実座標 (s, t)"""
    u = z / (2 * lp.omega)
    tau = lp.half_periods.tau
    t = mp.im(u) / mp.im(tau)
    s = mp.re(u) - t * mp.re(tau)
    return s, t


def reduce_to_cell(z, lp: LatticeParams):
    """
    原点中心の基本周期平行四辺形へ平行移動

    Returns:
        tuple: (z0, m, n) で z = z0 + 2mω + 2nω′
    """
    s, t = lattice_coordinates(z, lp)
    m = int(mp.floor(s + mp.mpf(1) / 2))
    n = int(mp.floor(t + mp.mpf(1) / 2))
    z0 = z - 2 * m * lp.omega - 2 * n * lp.omega_prime
    return z0, m, n


def nearest_translate(z, target, lp: LatticeParams):
    """z の格子平行移動のうち target に最も近いもの"""
    s, t = lattice_coordinates(target - z, lp)
    m = int(mp.nint(s))
    n = int(mp.nint(t))
    return z + 2 * m * lp.omega + 2 * n * lp.omega_prime


def _theta_stack(z0, lp: LatticeParams):
    v = mp.pi * z0 / (2 * lp.omega)
    return [mp.jtheta(1, v, lp.q, k) for k in range(4)]


def _guard(z0, z):
    radius = mp.ldexp(1, -mp.prec // 4)
    if abs(z0) < radius:
        raise DomainError(
            f"格子点に近すぎます: z={mp.nstr(z, 15)}",
            error_code="near_lattice",
            guard=f"|z − 2mω − 2nω′| < 2^(−{mp.prec // 4})",
        )


def weierstrass_sigma(z, lattice):
    """σ(z)（格子点を含む全ての z で有効）"""
    lp = _as_lattice(lattice)
    z = mp.mpc(z)
    z0, m, n = reduce_to_cell(z, lp)
    omega = lp.omega
    v = mp.pi * z0 / (2 * omega)
    sigma0 = (2 * omega / mp.pi) * mp.exp(lp.eta * z0 ** 2 / (2 * omega)) * mp.jtheta(1, v, lp.q) / lp.theta1_d1
    if m == 0 and n == 0:
        return sigma0
    shift = 2 * m * lp.eta + 2 * n * lp.eta_prime
    sign = -1 if (m + n + m * n) % 2 else 1
    return sign * mp.exp(shift * (z0 + m * omega + n * lp.omega_prime)) * sigma0


def weierstrass_zeta(z, lattice):
    return wp_family(z, lattice)[1]


def weierstrass_p(z, lattice):
    return wp_family(z, lattice)[2]


def weierstrass_p_prime(z, lattice):
    return wp_family(z, lattice)[3]


def wp_family(z, lattice):
    """
    σ, ζ, ℘, ℘′ をまとめて評価

    Args:
        z: 複素数
        lattice: HalfPeriods または LatticeParams

    Returns:
        tuple: (sigma, zeta, wp, wp_prime)

    Raises:
        DomainError: 格子点から 2^(−P/4) 以内
    """
    lp = _as_lattice(lattice)
    z = mp.mpc(z)
    z0, m, n = reduce_to_cell(z, lp)
    _guard(z0, z)

    omega = lp.omega
    c = mp.pi / (2 * omega)
    th0, th1, th2, th3 = _theta_stack(z0, lp)

    zeta0 = lp.eta * z0 / omega + c * th1 / th0
    wp = -lp.eta / omega - c ** 2 * (th2 * th0 - th1 ** 2) / th0 ** 2
    wp_prime = -c ** 3 * (th3 * th0 ** 2 - 3 * th2 * th1 * th0 + 2 * th1 ** 3) / th0 ** 3

    shift = 2 * m * lp.eta + 2 * n * lp.eta_prime
    zeta = zeta0 + shift
    sigma0 = (2 * omega / mp.pi) * mp.exp(lp.eta * z0 ** 2 / (2 * omega)) * th0 / lp.theta1_d1
    sign = -1 if (m + n + m * n) % 2 else 1
    sigma = sign * mp.exp(shift * (z0 + m * omega + n * lp.omega_prime)) * sigma0
    return sigma, zeta, wp, wp_prime


def wp_ode_residual(z, lattice):
    """℘′² − (4℘³ − g₂℘ − g₃) を max(1,|℘|³) で正規化した残差"""
    lp = _as_lattice(lattice)
    _, _, wp, wpp = wp_family(z, lp)
    lhs = wpp ** 2
    rhs = 4 * wp ** 3 - lp.g2 * wp - lp.g3
    return abs(lhs - rhs) / max(mp.mpf(1), abs(wp) ** 3)


def eisenstein_row_sum(z, lattice, radius: int = 50):
    """
    格子和の行ごとの閉形式による ℘ の独立オラクル

    Σ_m (z − 2mω − c)⁻² = (π/2ω)² csc²(π(z−c)/2ω) を各行に使い、
    行の和を |n| ≤ radius で打ち切る。
    """
    lp = _as_lattice(lattice)
    z = mp.mpc(z)
    omega, omega_prime = lp.omega, lp.omega_prime
    c = mp.pi / (2 * omega)
    total = mp.mpc(0)
    constant = mp.mpf(1) / 3
    for n in range(-radius, radius + 1):
        total += mp.csc(c * (z - 2 * n * omega_prime)) ** 2
        if n:
            constant += mp.csc(n * mp.pi * lp.half_periods.tau) ** 2
    return c ** 2 * (total - constant)
