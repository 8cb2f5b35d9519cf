"""
多倍長精度と許容誤差の管理
"""
import logging
import re
from contextlib import contextmanager

from mpmath import mp

from utils.error_handler import ValidationError

logger = logging.getLogger(__name__)


class ToleranceConfig:
    """
    精度・許容誤差の設定

    Args:
        precision_bits: 2進精度 P（64以上）
        residual_tol: 残差の許容値（省略時 2^(−P/2)）
        digit_tol: 定数照合に使う10進桁数
    """

    def __init__(self, precision_bits: int = 256, residual_tol: float = None, digit_tol: int = 30):
        if precision_bits < 64:
            raise ValidationError(f"precision_bits は64以上が必要です: {precision_bits}")
        if residual_tol is not None and residual_tol <= 0:
            raise ValidationError(f"residual_tol は正である必要があります: {residual_tol}")
        self.precision_bits = int(precision_bits)
        self._residual_tol = residual_tol
        self.digit_tol = int(digit_tol)

    @property
    def residual_tol(self):
        if self._residual_tol is not None:
            return mp.mpf(self._residual_tol)
        return mp.ldexp(1, -self.precision_bits // 2)

    def to_dict(self) -> dict:
        return {
            "precision_bits": self.precision_bits,
            "residual_tol": mp.nstr(self.residual_tol, 5),
            "digit_tol": self.digit_tol,
        }


@contextmanager
def workprec(precision_bits: int):
    """mp.prec を一時的に設定する"""
    if precision_bits < 64:
        raise ValidationError(f"精度は64ビット以上が必要です: {precision_bits}")
    with mp.workprec(precision_bits):
        yield


def current_tol():
    """現在の精度での既定許容誤差 2^(−P/2)"""
    return mp.ldexp(1, -mp.prec // 2)


def relative_residual(lhs, rhs, scale=None):
    """|lhs − rhs| / max(1, scale)"""
    if scale is None:
        scale = max(abs(lhs), abs(rhs))
    return abs(lhs - rhs) / max(mp.mpf(1), scale)


def matching_digits(a, b) -> int:
    """a と b が一致する有効桁数"""
    if a == b:
        return mp.dps
    err = abs(a - b) / max(abs(b), mp.eps)
    return int(mp.floor(-mp.log10(err)))


_ALLOWED = re.compile(r"^[0-9a-z_+\-*/().^ ]+$")
_NAMES = ("sqrt2", "sqrt", "exp", "pi", "i")


def parse_complex(text: str):
    """
    "2i", "sqrt2*i", "1/2+3i/2", "exp(2*pi*i/3)" などを複素数に変換

    Raises:
        ValidationError: 解釈できない文字列
    """
    source = text.strip().lower().replace("^", "**")
    if not source or not _ALLOWED.match(source):
        raise ValidationError(f"複素数として解釈できません: {text}")
    words = set(re.findall(r"[a-z_][a-z0-9_]*", source))
    if not words <= set(_NAMES):
        raise ValidationError(f"未知の識別子: {sorted(words - set(_NAMES))}")
    source = re.sub(r"(\d|\))\s*(sqrt2|sqrt|exp|pi|i\b|\()", r"\1*\2", source)
    namespace = {
        "i": mp.j,
        "pi": mp.pi,
        "sqrt": mp.sqrt,
        "sqrt2": mp.sqrt(2),
        "exp": mp.exp,
    }
    try:
        value = eval(source, {"__builtins__": {}}, namespace)
    except Exception as e:
        raise ValidationError(f"複素数として解釈できません: {text} ({e})")
    return mp.mpc(value)


def format_value(value, digits: int = None) -> str:
    """
    10進表示（末尾に精度注記 ±1e−N を付ける）
    """
    digits = digits or max(15, mp.dps - 5)
    annotation = f"±1e-{digits}"
    value = mp.mpc(value)
    if value.imag == 0:
        return f"{mp.nstr(value.real, digits)} {annotation}"
    return f"{mp.nstr(value, digits)} {annotation}"
