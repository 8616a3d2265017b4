"""Experiment runner: convergence sweeps over the window index, rate fitting
against predicted exponents, bound-dominance accounting, and report rendering.

Rows are computed independently per window index (optionally across a thread
pool) and assembled in index order; every reduction is either order-fixed or
order-independent, so reruns and different worker counts produce byte-identical
CSV output.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import bounds, genfun, reconstruction
from .genfun import ProductWindow, Rectangle
from .reconstruction import ERROR_FLOOR, ReconstructionPlan
from .regularizers import RegularizerSpec, hyper_constants, make_gaussian, make_hyper_gaussian
from .sequences import SamplingSequence
from .signals import Signal

__all__ = [
    "SweepSettings",
    "SweepRow",
    "SweepReport",
    "FitError",
    "sweep",
    "fit_rate",
    "fit_rate_free_exponent",
    "render_csv",
    "summary_dict",
    "FLOOR_THRESHOLD",
]

FLOOR_THRESHOLD = ERROR_FLOOR

CSV_HEADER = "N,N_star,max_error,bound,at_floor"


class FitError(ValueError):
    """Not enough clean rows to fit a rate."""


@dataclass(frozen=True)
class SweepSettings:
    sequence: SamplingSequence
    signal: Signal
    regularizer_kind: str = "gaussian"   # "gaussian" | "hyper_gaussian"
    hyper_m: int = 2
    n_list: tuple[int, ...] = ()
    grid_points: int = 512
    half_width: int | None = None        # None -> per-index default window
    tail_correction: bool = True
    threads: int = 1
    check_dominance: bool | None = None  # None -> automatic by family

    def __post_init__(self) -> None:
        if not self.n_list:
            raise ValueError("the sweep needs at least one window index")
        if list(self.n_list) != sorted(set(self.n_list)):
            raise ValueError("window indices must be strictly increasing")
        if self.n_list[0] < 1:
            raise ValueError("window indices must be >= 1")
        if self.regularizer_kind not in ("gaussian", "hyper_gaussian"):
            raise ValueError(f"unknown regularizer kind {self.regularizer_kind!r}")
        if self.grid_points < 64:
            raise ValueError("grid must have at least 64 points")

    def dominance_active(self) -> bool:
        if self.check_dominance is not None:
            return self.check_dominance
        return self.regularizer_kind == "gaussian" and self.sequence.kind in (
            "uniform",
            "sine_type",
        )

    def window_for(self, n: int) -> ProductWindow:
        if self.half_width is None:
            return ProductWindow(
                max(8 * n, 512), tail_correction=self.tail_correction
            )
        return ProductWindow(self.half_width, tail_correction=self.tail_correction)

    def regularizer_for(self, pl: ReconstructionPlan) -> RegularizerSpec:
        if self.regularizer_kind == "gaussian":
            return make_gaussian(self.signal.bandwidth, pl.margin)
        return make_hyper_gaussian(self.hyper_m, self.signal.bandwidth, pl.margin)

    def predicted_slope(self) -> float:
        if self.regularizer_kind == "gaussian":
            return -(math.pi - self.signal.bandwidth) / 2.0
        return -hyper_constants(self.hyper_m, self.signal.bandwidth).decay_rate


@dataclass(frozen=True)
class SweepRow:
    N: int
    margin: float
    max_error: float
    bound: float
    at_floor: bool


@dataclass(frozen=True)
class SweepReport:
    rows: tuple[SweepRow, ...]
    fitted_slope: float
    fitted_intercept: float
    predicted_slope: float
    slope_rel_dev: float
    prefactor_exponent: float | None
    dominance_checked: bool
    dominance_violations: int
    monotonicity_violations: int


def fit_rate(points: list[tuple[float, float]]) -> tuple[float, float]:
    """Least-squares line through (abscissa, value) pairs; needs >= 4 points."""
    if len(points) < 4:
        raise FitError(f"rate fit needs at least 4 points, got {len(points)}")
    x = np.array([p[0] for p in points])
    y = np.array([p[1] for p in points])
    if np.ptp(x) == 0.0:
        raise FitError("degenerate abscissas")
    design = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    return float(slope), float(intercept)


def fit_rate_free_exponent(
    points: list[tuple[float, float]]
) -> tuple[float, float, float]:
    """Fit value = slope * x + exponent * log(x) + intercept; needs >= 4 points."""
    if len(points) < 4:
        raise FitError(f"free-exponent fit needs at least 4 points, got {len(points)}")
    x = np.array([p[0] for p in points])
    y = np.array([p[1] for p in points])
    if np.ptp(x) == 0.0:
        raise FitError("degenerate abscissas")
    design = np.column_stack([x, np.log(x), np.ones_like(x)])
    (slope, exponent, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    return float(slope), float(exponent), float(intercept)


def _run_row(settings: SweepSettings, n: int):
    """One sweep row: plan, measure, bound; returns row plus violation count."""
    seq = settings.sequence
    f = settings.signal
    window = settings.window_for(n)
    pl = reconstruction.plan(seq, n, window)
    reg = settings.regularizer_for(pl)
    xs, errs = reconstruction.error_profile(f, seq, pl, reg, settings.grid_points)

    violations = 0
    if settings.regularizer_kind == "gaussian":
        rect = Rectangle(pl.t_minus, pl.t_plus, -pl.margin, pl.margin)
        floor = genfun.phi_floor(seq, rect, window=window)
        per_point = bounds.gaussian_bound_profile(f, seq, pl, xs, floor)
        bound_value = float(per_point.max())
        if settings.dominance_active():
            live = errs >= FLOOR_THRESHOLD
            violations = int(np.count_nonzero(errs[live] > per_point[live]))
    else:
        bound_value = bounds.hyper_rate_bound(pl, settings.hyper_m, f.bandwidth, seq)

    worst = float(errs.max())
    row = SweepRow(
        N=n,
        margin=pl.margin,
        max_error=worst,
        bound=bound_value,
        at_floor=worst < FLOOR_THRESHOLD,
    )
    return row, violations


def sweep(settings: SweepSettings) -> SweepReport:
    if settings.threads > 1:
        with ThreadPoolExecutor(max_workers=settings.threads) as pool:
            results = list(pool.map(lambda n: _run_row(settings, n), settings.n_list))
    else:
        results = [_run_row(settings, n) for n in settings.n_list]

    rows = tuple(r for r, _ in results)
    violations = sum(v for _, v in results)

    clean = [r for r in rows if not r.at_floor]
    points = [(r.margin, math.log(r.max_error) + 0.5 * math.log(r.margin)) for r in clean]
    slope, intercept = fit_rate(points)
    predicted = settings.predicted_slope()
    rel_dev = abs(slope - predicted) / abs(predicted)

    prefactor = None
    try:
        _, prefactor, _ = fit_rate_free_exponent(
            [(r.margin, math.log(r.max_error)) for r in clean]
        )
    except FitError:
        pass

    mono = 0
    for prev, cur in zip(clean, clean[1:]):
        if cur.max_error > prev.max_error * 1.1:
            mono += 1

    return SweepReport(
        rows=rows,
        fitted_slope=slope,
        fitted_intercept=intercept,
        predicted_slope=predicted,
        slope_rel_dev=rel_dev,
        prefactor_exponent=prefactor,
        dominance_checked=settings.dominance_active(),
        dominance_violations=violations,
        monotonicity_violations=mono,
    )


def render_csv(report: SweepReport) -> str:
    """Fixed-column CSV; floats use shortest round-trip formatting."""
    lines = [CSV_HEADER]
    for r in report.rows:
        lines.append(
            f"{r.N},{float(r.margin)!r},{float(r.max_error)!r},"
            f"{float(r.bound)!r},{1 if r.at_floor else 0}"
        )
    return "\n".join(lines) + "\n"


def summary_dict(report: SweepReport) -> dict:
    return {
        "fitted_slope": report.fitted_slope,
        "fitted_intercept": report.fitted_intercept,
        "predicted_slope": report.predicted_slope,
        "slope_rel_dev": report.slope_rel_dev,
        "prefactor_exponent": report.prefactor_exponent,
        "dominance_checked": report.dominance_checked,
        "dominance_violations": report.dominance_violations,
        "monotonicity_violations": report.monotonicity_violations,
        "rows": [
            {
                "N": r.N,
                "N_star": r.margin,
                "max_error": r.max_error,
                "bound": r.bound,
                "at_floor": r.at_floor,
            }
            for r in report.rows
        ],
    }
