"""Gaussian and hyper-Gaussian regularizers with parameters tied to a plan.

A regularizer multiplies each series term by G(z - lambda_n), where
G(z) = exp(-coeff * z^(2m)) and G(0) = 1. The coefficient is derived from the
signal bandwidth and the plan margin: coeff = (pi - sigma)/(2*margin) for the
Gaussian, and coeff = mu_m * margin^(1-2m) for a hyper-Gaussian of order m,
where mu_m is the closed-form decay rate below. The decay rate falls as m
grows (mu_1 = (pi - sigma)/2 is the Gaussian rate), so judged by the
exponential term alone the Gaussian is the best of the family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "RegularizerSpec",
    "HyperConstants",
    "hyper_constants",
    "make_gaussian",
    "make_hyper_gaussian",
    "eval_G",
    "MAX_HYPER_ORDER",
]

# Larger orders make the exponent coefficient underflow-prone while the decay
# rate only gets worse, so they are rejected outright.
MAX_HYPER_ORDER = 20


class HyperConstants(NamedTuple):
    strip_ratio: float  # valid imaginary strip is |y| < strip_ratio * margin
    decay_rate: float   # error decays like exp(-decay_rate * margin)


def hyper_constants(m: int, sigma: float) -> HyperConstants:
    """Closed-form constants for order m at bandwidth sigma.

    strip_ratio = (2m-1)^(-1/2m) * sin(pi/(4m-2))^((2m-1)/2m)
    decay_rate  = ((2m-1)/2m) * (pi - sigma) * strip_ratio

    m = 1 reproduces the Gaussian values (strip_ratio 1, rate (pi-sigma)/2)
    and is accepted for reference; series use requires m >= 2.
    """
    if m < 1:
        raise ValueError("order must be a positive integer")
    if not 0.0 < sigma < math.pi:
        raise ValueError(f"bandwidth must lie in (0, pi), got {sigma}")
    s = math.sin(math.pi / (4 * m - 2))
    b = (2 * m - 1) ** (-1.0 / (2 * m)) * s ** ((2 * m - 1) / (2 * m))
    mu = (2 * m - 1) / (2 * m) * (math.pi - sigma) * b
    return HyperConstants(strip_ratio=b, decay_rate=mu)


@dataclass(frozen=True)
class RegularizerSpec:
    kind: str            # "gaussian" | "hyper_gaussian"
    m: int               # half the exponent power; 1 for the Gaussian
    sigma: float
    margin: float
    coeff: float         # G(z) = exp(-coeff * z^(2m))
    decay_rate: float
    strip_ratio: float

    @property
    def power(self) -> int:
        return 2 * self.m


def make_gaussian(sigma: float, margin: float) -> RegularizerSpec:
    """Gaussian regularizer exp(-coeff * z^2) with coeff = (pi-sigma)/(2*margin)."""
    if not 0.0 < sigma < math.pi:
        raise ValueError(f"bandwidth must lie in (0, pi), got {sigma}")
    if margin <= 0:
        raise ValueError("margin must be positive")
    return RegularizerSpec(
        kind="gaussian",
        m=1,
        sigma=float(sigma),
        margin=float(margin),
        coeff=(math.pi - sigma) / (2.0 * margin),
        decay_rate=(math.pi - sigma) / 2.0,
        strip_ratio=1.0,
    )


def make_hyper_gaussian(m: int, sigma: float, margin: float) -> RegularizerSpec:
    """Hyper-Gaussian exp(-coeff * z^(2m)) with coeff = decay_rate * margin^(1-2m)."""
    if m < 2:
        raise ValueError("hyper-Gaussian order must be at least 2")
    if m > MAX_HYPER_ORDER:
        raise ValueError(f"hyper-Gaussian order capped at {MAX_HYPER_ORDER}")
    if margin <= 0:
        raise ValueError("margin must be positive")
    c = hyper_constants(m, sigma)
    return RegularizerSpec(
        kind="hyper_gaussian",
        m=int(m),
        sigma=float(sigma),
        margin=float(margin),
        coeff=c.decay_rate * margin ** (1 - 2 * m),
        decay_rate=c.decay_rate,
        strip_ratio=c.strip_ratio,
    )


def eval_G(spec: RegularizerSpec, z):
    """Regularizer value; exactly 1 at the origin."""
    w = np.asarray(z)
    return np.exp(-spec.coeff * w ** spec.power)
