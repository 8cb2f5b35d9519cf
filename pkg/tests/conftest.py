"""
共通フィクスチャ
"""
import pytest
from mpmath import mp


@pytest.fixture
def precision():
    """mp.prec を設定して終了時に戻す（既定 128 ビット）"""
    saved = mp.prec

    def set_bits(bits: int = 128):
        mp.prec = bits
        return bits

    set_bits()
    yield set_bits
    mp.prec = saved


@pytest.fixture
def tol(precision):
    """現在の精度での既定許容値 2^(−P/2)"""
    return lambda: mp.ldexp(1, -mp.prec // 2)
