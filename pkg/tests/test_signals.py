import math

import numpy as np
import pytest

from nusamp import signals
from nusamp.signals import _TAYLOR_SWITCH, _sinc

SIGMA = math.pi / 2

ALL_KINDS = [
    signals.SincSignal(SIGMA),
    signals.CosSignal(SIGMA),
    signals.SincSquaredSignal(SIGMA),
    signals.ShiftedSincCombo(SIGMA, [(0.7, 0.0), (-0.4, 2.5)]),
]


def test_sinc_at_origin():
    assert signals.SincSignal(SIGMA).eval(0.0) == 1.0


def test_cos_at_two():
    assert signals.CosSignal(SIGMA).eval(2.0) == pytest.approx(-1.0, abs=1e-15)


def test_sinc_at_imaginary_unit():
    # sin(i sigma)/(i sigma) = sinh(sigma)/sigma, checked against the
    # hyperbolic identity evaluated independently
    f = signals.SincSignal(SIGMA)
    expected = math.sinh(SIGMA) / SIGMA
    got = f.eval(1j)
    assert got.real == pytest.approx(expected, rel=1e-14)
    assert got.imag == pytest.approx(0.0, abs=1e-15)
    assert expected == pytest.approx(1.465052, abs=5e-7)


def test_taylor_branch_matches_direct_formula_at_switch():
    for w in (_TAYLOR_SWITCH * 0.999, _TAYLOR_SWITCH * 1.001):
        series = 1.0 - w * w / 6.0 + w**4 / 120.0
        direct = math.sin(w) / w
        assert _sinc(w) == pytest.approx(series, rel=1e-15)
        assert _sinc(w) == pytest.approx(direct, rel=1e-15)


def test_sinc_squared_value():
    f = signals.SincSquaredSignal(SIGMA)
    assert f.eval(0.0) == 1.0
    x = 1.3
    half = math.sin(SIGMA * x / 2) / (SIGMA * x / 2)
    assert f.eval(x) == pytest.approx(half * half, rel=1e-14)


def test_combo_sup_bound():
    f = signals.ShiftedSincCombo(SIGMA, [(0.7, 0.0), (-0.4, 2.5)])
    assert f.sup_bound == pytest.approx(1.1)
    assert f.eval(2.5) == pytest.approx(
        0.7 * math.sin(SIGMA * 2.5) / (SIGMA * 2.5) - 0.4, rel=1e-14
    )


@pytest.mark.parametrize("f", ALL_KINDS, ids=lambda f: f.kind)
def test_real_in_real_out(f):
    xs = np.linspace(-5, 5, 101)
    vals = np.asarray(f.eval(xs))
    assert not np.iscomplexobj(vals)


@pytest.mark.parametrize("f", ALL_KINDS, ids=lambda f: f.kind)
def test_exponential_growth_envelope(f):
    # |f(x+iy)| <= sup_bound * exp(sigma |y|) on a test grid
    xs = np.linspace(-20, 20, 81)
    ys = np.linspace(-5, 5, 41)
    X, Y = np.meshgrid(xs, ys)
    Z = X + 1j * Y
    vals = np.abs(np.asarray(f.eval(Z)))
    envelope = f.sup_bound * np.exp(f.bandwidth * np.abs(Y))
    assert np.all(vals <= envelope * (1 + 1e-12))


def test_bandwidth_domain():
    with pytest.raises(ValueError):
        signals.SincSignal(math.pi)
    with pytest.raises(ValueError):
        signals.CosSignal(0.0)
    with pytest.raises(ValueError):
        signals.ShiftedSincCombo(SIGMA, [])
