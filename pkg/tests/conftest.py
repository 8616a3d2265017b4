import math

import pytest

from nusamp import sequences, signals

SIGMA = math.pi / 2


@pytest.fixture
def uniform():
    return sequences.make_uniform()


@pytest.fixture
def perturbed():
    return sequences.make_perturbed(0.2, 1)


@pytest.fixture
def sine_type():
    return sequences.make_sine_type(1.0, sequences.SineCombo(((0.3, 1.0),)))


@pytest.fixture
def sinc_signal():
    return signals.SincSignal(SIGMA)


@pytest.fixture
def cos_signal():
    return signals.CosSignal(SIGMA)
