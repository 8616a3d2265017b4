import math

import numpy as np
import pytest

from nusamp import harness, sequences, signals
from nusamp.harness import (
    FitError,
    SweepSettings,
    fit_rate,
    fit_rate_free_exponent,
    render_csv,
    sweep,
)

SIGMA = math.pi / 2


class TestFitRate:
    def test_exact_line(self):
        points = [(float(x), -0.5 * x + 1.0) for x in (2, 5, 9, 14, 20)]
        slope, intercept = fit_rate(points)
        assert slope == pytest.approx(-0.5, abs=1e-12)
        assert intercept == pytest.approx(1.0, abs=1e-12)

    def test_too_few_points(self):
        with pytest.raises(FitError):
            fit_rate([(1.0, 0.0), (2.0, 1.0)])

    def test_degenerate_abscissas(self):
        with pytest.raises(FitError):
            fit_rate([(3.0, 0.0)] * 5)

    def test_free_exponent_recovery(self):
        xs = np.array([4.0, 7.0, 11.0, 18.0, 26.0, 40.0])
        ys = -0.5 * xs + 0.3 * np.log(xs) + 2.0
        slope, exponent, intercept = fit_rate_free_exponent(list(zip(xs, ys)))
        assert slope == pytest.approx(-0.5, abs=1e-10)
        assert exponent == pytest.approx(0.3, abs=1e-9)
        assert intercept == pytest.approx(2.0, abs=1e-9)


def small_settings(**overrides):
    base = dict(
        sequence=sequences.make_uniform(),
        signal=signals.SincSignal(SIGMA),
        regularizer_kind="gaussian",
        n_list=(5, 7, 9, 11, 13),
        grid_points=128,
    )
    base.update(overrides)
    return SweepSettings(**base)


class TestSweep:
    def test_uniform_gaussian_small(self):
        report = sweep(small_settings())
        assert report.dominance_checked
        assert report.dominance_violations == 0
        assert report.monotonicity_violations == 0
        assert -1.0 < report.fitted_slope < -0.6
        assert report.predicted_slope == pytest.approx(-math.pi / 4)
        assert len(report.rows) == 5
        assert all(not r.at_floor for r in report.rows)

    def test_hyper_small(self):
        report = sweep(small_settings(regularizer_kind="hyper_gaussian", hyper_m=2))
        assert not report.dominance_checked
        assert report.fitted_slope < -0.4
        assert report.predicted_slope == pytest.approx(
            -0.75 * SIGMA * 3.0 ** (-0.25) * 0.5**0.75
        )

    def test_all_rows_floored_raises(self):
        with pytest.raises(FitError):
            sweep(small_settings(n_list=(41, 43, 45, 47)))

    def test_threads_agree_with_serial(self):
        serial = sweep(small_settings())
        threaded = sweep(small_settings(threads=4))
        assert render_csv(serial) == render_csv(threaded)

    def test_rerun_is_byte_identical(self):
        a = render_csv(sweep(small_settings(sequence=sequences.make_perturbed(0.2, 1))))
        b = render_csv(sweep(small_settings(sequence=sequences.make_perturbed(0.2, 1))))
        assert a == b

    def test_csv_shape(self):
        report = sweep(small_settings())
        text = render_csv(report)
        lines = text.strip().split("\n")
        assert lines[0] == "N,N_star,max_error,bound,at_floor"
        assert len(lines) == 6
        first = lines[1].split(",")
        assert first[0] == "5"
        assert float(first[1]) == 4.5
        assert first[4] in ("0", "1")

    def test_settings_validation(self):
        with pytest.raises(ValueError):
            small_settings(n_list=())
        with pytest.raises(ValueError):
            small_settings(n_list=(5, 5, 7))
        with pytest.raises(ValueError):
            small_settings(n_list=(7, 5))
        with pytest.raises(ValueError):
            small_settings(regularizer_kind="spline")
        with pytest.raises(ValueError):
            small_settings(grid_points=32)

    def test_summary_dict_round_trip(self):
        report = sweep(small_settings())
        summary = harness.summary_dict(report)
        assert summary["rows"][0]["N"] == 5
        assert summary["fitted_slope"] == report.fitted_slope
        assert summary["dominance_violations"] == 0
