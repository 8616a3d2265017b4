"""Explicit error bounds for the Gaussian-regularized series, plus the
hyper-Gaussian rate shape.

The Gaussian bound at z = x + iy is the product

    C(y) * sup|f| * |product(z)| / (pi * floor) * exp(-(pi-sigma)/2 * margin)

where floor is a valid lower bound for min over the contour rectangle of
|product(zeta)| * exp(-pi |Im zeta|). The product value and the floor carry
the same normalization, so any rescaling of the generating function cancels.
The hyper-Gaussian counterpart has a non-explicit constant, so it is exposed
as a rate shape only and never used as a dominance bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import genfun
from .reconstruction import ReconstructionPlan
from .regularizers import hyper_constants
from .sequences import SamplingSequence
from .signals import Signal

__all__ = [
    "BoundReport",
    "c_factor",
    "gaussian_bound",
    "gaussian_bound_profile",
    "corollary_bound",
    "hyper_rate_bound",
]


@dataclass(frozen=True)
class BoundReport:
    bound_value: float
    c_n_y: float
    phi_floor: float
    phi_at_z: float
    exp_term: float


def c_factor(sigma: float, margin: float, y: float) -> float:
    """Height-dependent prefactor; even in y and singular as |y| -> margin."""
    if abs(y) >= margin:
        raise ValueError(
            f"imaginary part {y} must stay inside the margin strip |y| < {margin}"
        )
    gap = math.pi - sigma
    horizontal = math.sqrt(2.0 * math.pi / (gap * margin)) * math.cosh(gap * y)
    vertical = (4.0 / (gap * margin)) * math.exp(gap * y * y / (2.0 * margin)) / (
        1.0 - (y / margin) ** 2
    )
    return horizontal + vertical


def gaussian_bound(
    f: Signal,
    seq: SamplingSequence,
    pl: ReconstructionPlan,
    z: complex,
    floor: float,
) -> BoundReport:
    """Explicit bound on |f - series| at z for the Gaussian regularizer.

    ``floor`` must be a valid lower bound for the contour minimum over the
    rectangle with corners t_minus/t_plus + i*(Im z +- margin); the sampled
    floor already carries a 0.9 safety factor, which only enlarges the bound.
    """
    if floor <= 0:
        raise ValueError("contour floor must be positive")
    zc = complex(z)
    cy = c_factor(f.bandwidth, pl.margin, zc.imag)
    value = genfun.phi(seq, z, pl.window)
    phi_abs = 0.0 if value.is_zero else math.exp(value.log_magnitude)
    exp_term = math.exp(-(math.pi - f.bandwidth) / 2.0 * pl.margin)
    bound = cy * f.sup_bound * phi_abs / (math.pi * floor) * exp_term
    return BoundReport(
        bound_value=bound, c_n_y=cy, phi_floor=floor, phi_at_z=phi_abs, exp_term=exp_term
    )


def gaussian_bound_profile(
    f: Signal,
    seq: SamplingSequence,
    pl: ReconstructionPlan,
    xs: np.ndarray,
    floor: float,
) -> np.ndarray:
    """Vectorized Gaussian bound along a real grid (shared C(0) and floor)."""
    if floor <= 0:
        raise ValueError("contour floor must be positive")
    cy = c_factor(f.bandwidth, pl.margin, 0.0)
    logmag, _ = genfun.log_phi_grid(seq, np.asarray(xs, dtype=np.float64), pl.window)
    phi_abs = np.exp(logmag)
    exp_term = math.exp(-(math.pi - f.bandwidth) / 2.0 * pl.margin)
    return cy * f.sup_bound * phi_abs / (math.pi * floor) * exp_term


def corollary_bound(
    f: Signal,
    seq: SamplingSequence,
    pl: ReconstructionPlan,
    x: float,
    coefficient: float,
    power: float,
) -> float:
    """Bound for sequences whose contour floor obeys floor >= C * radius^(-p).

    The caller supplies (C, p) for the family: the uniform sequence admits
    p = 0 with C its constant floor; a perturbed family with radius L admits
    p = 4L with C calibrated from computed floors.
    """
    if coefficient <= 0:
        raise ValueError("floor coefficient must be positive")
    if power < 0:
        raise ValueError("floor exponent must be nonnegative")
    gap = math.pi - f.bandwidth
    margin = pl.margin
    radius = math.sqrt(max(pl.t_plus**2, pl.t_minus**2) + margin**2)
    value = genfun.phi(seq, complex(x), pl.window)
    phi_abs = 0.0 if value.is_zero else math.exp(value.log_magnitude)
    prefactor = math.sqrt(2.0 * math.pi / gap) + 4.0 / (gap * math.sqrt(margin))
    return (
        prefactor
        * f.sup_bound
        * phi_abs
        * radius**power
        / (coefficient * math.pi * math.sqrt(margin))
        * math.exp(-gap / 2.0 * margin)
    )


def hyper_rate_bound(
    pl: ReconstructionPlan, m: int, sigma: float, seq: SamplingSequence
) -> float:
    """Rate shape exp(-mu_m * margin) / sqrt(margin) for order m.

    The theory's constant is not explicit, so this is only usable for rate
    fitting, never as a dominance bound. Requires a sequence with a finite
    symmetry budget sup_N |lambda_N + lambda_{-N}|.
    """
    if seq.symmetry_bound is None:
        raise ValueError(
            "hyper-Gaussian rate requires a proven bound on sup |lambda_N + lambda_{-N}|"
        )
    c = hyper_constants(m, sigma)
    return math.exp(-c.decay_rate * pl.margin) / math.sqrt(pl.margin)
