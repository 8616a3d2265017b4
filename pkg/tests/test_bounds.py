import math

import numpy as np
import pytest

from nusamp import genfun, reconstruction, sequences
from nusamp.bounds import (
    c_factor,
    corollary_bound,
    gaussian_bound,
    gaussian_bound_profile,
    hyper_rate_bound,
)
from nusamp.regularizers import make_gaussian
from nusamp.reconstruction import plan, reconstruct

SIGMA = math.pi / 2


def contour_floor(seq, pl):
    rect = genfun.Rectangle(pl.t_minus, pl.t_plus, -pl.margin, pl.margin)
    return genfun.phi_floor(seq, rect, window=pl.window)


class TestCFactor:
    def test_centerline_value(self):
        margin = 9.5
        gap = math.pi - SIGMA
        expected = math.sqrt(2 * math.pi / (gap * margin)) + 4.0 / (gap * margin)
        assert c_factor(SIGMA, margin, 0.0) == pytest.approx(expected, rel=1e-15)

    def test_even_in_height(self):
        for y in (0.3, 1.7, 5.0):
            assert c_factor(SIGMA, 9.5, y) == pytest.approx(
                c_factor(SIGMA, 9.5, -y), rel=1e-15
            )

    def test_strip_domain(self):
        with pytest.raises(ValueError):
            c_factor(SIGMA, 9.5, 9.5)
        with pytest.raises(ValueError):
            c_factor(SIGMA, 9.5, -10.0)


class TestGaussianBound:
    def test_exponential_term_value(self, uniform, sinc_signal):
        pl = plan(uniform, 10)
        floor = contour_floor(uniform, pl)
        report = gaussian_bound(sinc_signal, uniform, pl, 0.5, floor)
        assert report.exp_term == pytest.approx(math.exp(-math.pi / 4 * 9.5), rel=1e-14)
        assert report.exp_term == pytest.approx(5.7492e-4, abs=5e-8)

    def test_dominates_measured_error(self, uniform, sinc_signal):
        pl = plan(uniform, 10)
        reg = make_gaussian(SIGMA, pl.margin)
        floor = contour_floor(uniform, pl)
        z = 0.5
        measured = abs(
            float(sinc_signal.eval(z)) - reconstruct(sinc_signal, uniform, pl, reg, z)
        )
        report = gaussian_bound(sinc_signal, uniform, pl, z, floor)
        assert report.bound_value >= measured

    def test_profile_matches_scalar(self, uniform, sinc_signal):
        pl = plan(uniform, 8)
        floor = contour_floor(uniform, pl)
        xs = np.array([0.2, -0.6, 0.9])
        profile = gaussian_bound_profile(sinc_signal, uniform, pl, xs, floor)
        for x, v in zip(xs, profile):
            assert gaussian_bound(sinc_signal, uniform, pl, float(x), floor).bound_value == pytest.approx(float(v), rel=1e-13)

    def test_height_domain(self, uniform, sinc_signal):
        pl = plan(uniform, 10)
        floor = contour_floor(uniform, pl)
        with pytest.raises(ValueError):
            gaussian_bound(sinc_signal, uniform, pl, complex(0.3, pl.margin), floor)
        with pytest.raises(ValueError):
            gaussian_bound(sinc_signal, uniform, pl, 0.3, 0.0)

    def test_components_multiply_to_bound(self, uniform, sinc_signal):
        pl = plan(uniform, 10)
        floor = contour_floor(uniform, pl)
        r = gaussian_bound(sinc_signal, uniform, pl, 0.4, floor)
        product = (
            r.c_n_y * sinc_signal.sup_bound * r.phi_at_z / (math.pi * r.phi_floor) * r.exp_term
        )
        assert r.bound_value == pytest.approx(product, rel=1e-15)


class TestCorollaryBound:
    def test_reduces_to_lattice_display(self, uniform, sinc_signal):
        # with p = 0 and C = 1/(2 pi) (the lattice floor in product
        # normalization) the bound collapses to the closed form
        # (sqrt(2 pi/gap) + 4/(gap sqrt(margin))) * 2 |sin(pi x)| / (pi sqrt(margin)) * exp(-gap/2 margin)
        pl = plan(uniform, 10)
        x = 0.31
        gap = math.pi - SIGMA
        got = corollary_bound(sinc_signal, uniform, pl, x, 0.5 / math.pi, 0.0)
        expected = (
            (math.sqrt(2 * math.pi / gap) + 4.0 / (gap * math.sqrt(pl.margin)))
            * 2.0
            * abs(math.sin(math.pi * x))
            / (math.pi * math.sqrt(pl.margin))
            * math.exp(-gap / 2.0 * pl.margin)
        )
        assert got == pytest.approx(expected, rel=1e-10)

    def test_vanishes_toward_nodes(self, uniform, sinc_signal):
        pl = plan(uniform, 10)
        near = corollary_bound(sinc_signal, uniform, pl, 1e-9, 0.5 / math.pi, 0.0)
        away = corollary_bound(sinc_signal, uniform, pl, 0.5, 0.5 / math.pi, 0.0)
        assert near < 1e-8 * away

    def test_calibrated_perturbed_bound_dominates(self, perturbed, sinc_signal):
        # calibrate the floor coefficient at the smallest window, then check
        # dominance of the measured error across the sweep
        from nusamp.regularizers import make_gaussian

        power = 4 * 0.2
        pl5 = plan(perturbed, 5)
        floor5 = contour_floor(perturbed, pl5)
        radius5 = math.sqrt(max(pl5.t_plus**2, pl5.t_minus**2) + pl5.margin**2)
        coeff = floor5 * radius5**power
        for n in (5, 10, 15, 20, 25):
            pl = plan(perturbed, n)
            reg = make_gaussian(SIGMA, pl.margin)
            xs, errs = reconstruction.error_profile(sinc_signal, perturbed, pl, reg, 128)
            i = int(np.argmax(errs))
            got = corollary_bound(sinc_signal, perturbed, pl, float(xs[i]), coeff, power)
            assert got >= errs[i]

    def test_parameter_domain(self, uniform, sinc_signal):
        pl = plan(uniform, 5)
        with pytest.raises(ValueError):
            corollary_bound(sinc_signal, uniform, pl, 0.3, 0.0, 0.0)
        with pytest.raises(ValueError):
            corollary_bound(sinc_signal, uniform, pl, 0.3, 1.0, -1.0)


class TestHyperRateBound:
    def test_order_two_value(self, uniform):
        pl = plan(uniform, 10)
        # independent recomputation of the decay rate
        b2 = 3.0 ** (-0.25) * 0.5**0.75
        mu2 = 0.75 * (math.pi - SIGMA) * b2
        expected = math.exp(-mu2 * 9.5) / math.sqrt(9.5)
        got = hyper_rate_bound(pl, 2, SIGMA, uniform)
        assert got == pytest.approx(expected, rel=1e-13)
        assert got == pytest.approx(2.065e-3, abs=2e-6)

    def test_order_one_matches_gaussian_exponent(self, uniform):
        pl = plan(uniform, 10)
        got = hyper_rate_bound(pl, 1, SIGMA, uniform)
        assert got == pytest.approx(
            math.exp(-(math.pi - SIGMA) / 2 * 9.5) / math.sqrt(9.5), rel=1e-13
        )

    def test_decreases_with_margin(self, uniform):
        values = [
            hyper_rate_bound(plan(uniform, n), 2, SIGMA, uniform) for n in (5, 10, 20, 40)
        ]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_requires_symmetry_budget(self):
        class NoBudget(sequences.UniformSequence):
            symmetry_bound = None

        seq = NoBudget()
        pl = plan(seq, 5)
        with pytest.raises(ValueError):
            hyper_rate_bound(pl, 2, SIGMA, seq)
