"""HTTP service wrapping the reconstruction package.

Request and response schemas are pydantic models; each endpoint delegates to a
plain handler function that the CLI can also call in process. Domain errors
(bad parameters, mismatched configuration) surface as 422 responses.
"""

from __future__ import annotations

import math
import time
from typing import Literal, Union

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field, field_validator, model_validator

from . import __version__
from . import bounds as bounds_mod
from . import genfun, harness, oracle, reconstruction, sequences, signals
from .genfun import Rectangle

__all__ = [
    "app",
    "create_app",
    "run_sweep",
    "run_reconstruct",
    "run_sequence_table",
    "run_validate",
    "run_bound",
    "run_residue",
    "run_laplace",
    "health",
    "ROUTES",
]


# ---------------------------------------------------------------------------
# Wire schemas


class ComplexPoint(BaseModel):
    re: float
    im: float = 0.0

    @classmethod
    def wrap(cls, z: complex) -> "ComplexPoint":
        zc = complex(z)
        return cls(re=zc.real, im=zc.imag)

    def unwrap(self) -> complex:
        return complex(self.re, self.im)


class UniformSequenceModel(BaseModel):
    kind: Literal["uniform"] = "uniform"

    def build(self, default_seed: int = 0) -> sequences.SamplingSequence:
        return sequences.make_uniform()


class PerturbedSequenceModel(BaseModel):
    kind: Literal["perturbed"] = "perturbed"
    L: float = Field(ge=0.0, lt=0.5)
    seed: int | None = None

    def build(self, default_seed: int = 0) -> sequences.SamplingSequence:
        seed = self.seed if self.seed is not None else default_seed
        return sequences.make_perturbed(self.L, seed)


class SineTypeSequenceModel(BaseModel):
    kind: Literal["sine_type"] = "sine_type"
    A: float = Field(gt=0.0)
    terms: list[tuple[float, float]] = Field(min_length=0)

    @model_validator(mode="after")
    def _dominated(self) -> "SineTypeSequenceModel":
        if sum(abs(c) for c, _ in self.terms) >= self.A:
            raise ValueError("sum of |coefficients| must stay below the amplitude A")
        for _, nu in self.terms:
            if not 0.0 < nu < math.pi:
                raise ValueError("term frequencies must lie in (0, pi)")
        return self

    def build(self, default_seed: int = 0) -> sequences.SamplingSequence:
        return sequences.make_sine_type(self.A, sequences.SineCombo(tuple(self.terms)))


SequenceModel = Union[UniformSequenceModel, PerturbedSequenceModel, SineTypeSequenceModel]


class SignalModel(BaseModel):
    kind: Literal["sinc", "cos", "sinc_squared", "shifted_sinc_combo"] = "sinc"
    sigma: float = Field(gt=0.0, lt=math.pi)
    terms: list[tuple[float, float]] | None = None

    @model_validator(mode="after")
    def _terms_present(self) -> "SignalModel":
        if self.kind == "shifted_sinc_combo" and not self.terms:
            raise ValueError("shifted_sinc_combo needs (coefficient, shift) terms")
        return self

    def build(self) -> signals.Signal:
        if self.kind == "sinc":
            return signals.SincSignal(self.sigma)
        if self.kind == "cos":
            return signals.CosSignal(self.sigma)
        if self.kind == "sinc_squared":
            return signals.SincSquaredSignal(self.sigma)
        return signals.ShiftedSincCombo(self.sigma, list(self.terms or []))


class RegularizerModel(BaseModel):
    kind: Literal["gaussian", "hyper_gaussian"] = "gaussian"
    m: int = Field(default=2, ge=2, le=20)


class ExperimentConfig(BaseModel):
    """Sweep configuration; also the config-file schema for the CLI."""

    sequence: SequenceModel = Field(discriminator="kind")
    signal: SignalModel
    regularizer: RegularizerModel = RegularizerModel()
    N_list: list[int] = Field(min_length=1)
    grid_points: int = Field(default=512, ge=64)
    m_prod: int | Literal["auto"] = "auto"
    seed: int = 0
    threads: int | None = Field(default=None, ge=1)

    @field_validator("N_list")
    @classmethod
    def _increasing(cls, v: list[int]) -> list[int]:
        if v != sorted(set(v)) or v[0] < 1:
            raise ValueError("N_list must be strictly increasing positive integers")
        return v

    @model_validator(mode="after")
    def _window_fits(self) -> "ExperimentConfig":
        if self.m_prod != "auto" and self.m_prod < 2 * max(self.N_list) + 2:
            raise ValueError(
                f"m_prod {self.m_prod} too small for N {max(self.N_list)}"
            )
        return self

    def settings(self, threads: int | None = None) -> harness.SweepSettings:
        return harness.SweepSettings(
            sequence=self.sequence.build(self.seed),
            signal=self.signal.build(),
            regularizer_kind=self.regularizer.kind,
            hyper_m=self.regularizer.m,
            n_list=tuple(self.N_list),
            grid_points=self.grid_points,
            half_width=None if self.m_prod == "auto" else int(self.m_prod),
            threads=threads if threads is not None else (self.threads or 1),
        )


class SweepRequest(BaseModel):
    config: ExperimentConfig
    threads: int | None = Field(default=None, ge=1)


class SweepRowModel(BaseModel):
    N: int
    N_star: float
    max_error: float
    bound: float
    at_floor: bool


class SweepResponse(BaseModel):
    rows: list[SweepRowModel]
    fitted_slope: float
    fitted_intercept: float
    predicted_slope: float
    slope_rel_dev: float
    prefactor_exponent: float | None
    dominance_checked: bool
    dominance_violations: int
    monotonicity_violations: int
    elapsed_seconds: float
    csv_text: str


class ReconstructRequest(BaseModel):
    config: ExperimentConfig
    N: int = Field(ge=1)
    point: ComplexPoint
    recenter: bool = False


class ReconstructResponse(BaseModel):
    point: ComplexPoint
    value: ComplexPoint
    signal_value: ComplexPoint
    abs_error: float
    margin: float
    recentered_shift: float | None = None


class SequenceTableRequest(BaseModel):
    config: ExperimentConfig
    n_min: int
    n_max: int

    @model_validator(mode="after")
    def _ordered(self) -> "SequenceTableRequest":
        if self.n_min > self.n_max:
            raise ValueError("n_min must not exceed n_max")
        return self


class SequenceTableResponse(BaseModel):
    indices: list[int]
    values: list[float]
    csv_text: str


class ValidateRequest(BaseModel):
    config: ExperimentConfig
    window: int = Field(ge=1, default=100)


class ValidateResponse(BaseModel):
    window: int
    lambda0_exact: bool
    strictly_increasing: bool
    separation: float
    separation_floor_ok: bool
    symmetry_budget: float
    density_ratio: float | None
    root_residual: float | None
    passed: bool


class BoundRequest(BaseModel):
    config: ExperimentConfig
    N: int = Field(ge=1)
    point: ComplexPoint


class BoundResponse(BaseModel):
    bound_value: float
    c_n_y: float
    phi_floor: float
    phi_at_z: float
    exp_term: float
    margin: float


class ResidueRequest(BaseModel):
    config: ExperimentConfig
    N: int = Field(ge=1)
    point: ComplexPoint
    tol: float = Field(default=1e-10, gt=0.0)
    height: float = Field(default=2.5, gt=0.0)
    gate: float = Field(default=1e-8, gt=0.0)


class SideModel(BaseModel):
    hor_plus: ComplexPoint
    hor_minus: ComplexPoint
    ver_plus: ComplexPoint
    ver_minus: ComplexPoint


class ResidueResponse(BaseModel):
    direct: ComplexPoint
    contour: ComplexPoint
    rel_deviation: float
    sides: SideModel
    side_limits: dict[str, float]
    side_limits_ok: bool
    quadrature_error_estimate: float
    passed: bool


class LaplaceRequest(BaseModel):
    m: int = Field(ge=2, le=20)
    N: float = Field(gt=0.0)
    lo: float = 0.95
    hi: float = 1.05


class LaplaceResponse(BaseModel):
    ratio: float
    passed: bool


class HealthResponse(BaseModel):
    status: str
    version: str


# ---------------------------------------------------------------------------
# Handlers (pure functions over the wire models)


def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


def run_sweep(req: SweepRequest) -> SweepResponse:
    settings = req.config.settings(threads=req.threads)
    started = time.perf_counter()
    report = harness.sweep(settings)
    elapsed = time.perf_counter() - started
    return SweepResponse(
        rows=[
            SweepRowModel(
                N=r.N,
                N_star=r.margin,
                max_error=r.max_error,
                bound=r.bound,
                at_floor=r.at_floor,
            )
            for r in report.rows
        ],
        fitted_slope=report.fitted_slope,
        fitted_intercept=report.fitted_intercept,
        predicted_slope=report.predicted_slope,
        slope_rel_dev=report.slope_rel_dev,
        prefactor_exponent=report.prefactor_exponent,
        dominance_checked=report.dominance_checked,
        dominance_violations=report.dominance_violations,
        monotonicity_violations=report.monotonicity_violations,
        elapsed_seconds=elapsed,
        csv_text=harness.render_csv(report),
    )


def _plan_pieces(cfg: ExperimentConfig, n: int):
    settings = cfg.settings()
    seq = settings.sequence
    f = settings.signal
    window = settings.window_for(n)
    pl = reconstruction.plan(seq, n, window)
    reg = settings.regularizer_for(pl)
    return seq, f, pl, reg


def run_reconstruct(req: ReconstructRequest) -> ReconstructResponse:
    seq, f, pl, reg = _plan_pieces(req.config, req.N)
    z = req.point.unwrap()
    shift = None
    if req.recenter:
        if z.imag != 0.0:
            raise ValueError("recentering applies to real evaluation points only")
        seq, pl, x_local = reconstruction.recenter(
            seq, z.real, req.N, req.config.settings().window_for(req.N)
        )
        reg = req.config.settings().regularizer_for(pl)
        shift = z.real - x_local
        z = complex(x_local)
    value = reconstruction.reconstruct(f, seq, pl, reg, z if z.imag else z.real)
    truth = f.eval(z if z.imag else z.real)
    return ReconstructResponse(
        point=req.point,
        value=ComplexPoint.wrap(complex(value)),
        signal_value=ComplexPoint.wrap(complex(truth)),
        abs_error=abs(complex(truth) - complex(value)),
        margin=pl.margin,
        recentered_shift=shift,
    )


def run_sequence_table(req: SequenceTableRequest) -> SequenceTableResponse:
    seq = req.config.sequence.build(req.config.seed)
    idx = np.arange(req.n_min, req.n_max + 1, dtype=np.int64)
    vals = seq.values(idx)
    lines = ["n,lambda_n"]
    lines += [f"{int(n)},{float(v)!r}" for n, v in zip(idx, vals)]
    return SequenceTableResponse(
        indices=[int(n) for n in idx],
        values=[float(v) for v in vals],
        csv_text="\n".join(lines) + "\n",
    )


def run_validate(req: ValidateRequest) -> ValidateResponse:
    seq = req.config.sequence.build(req.config.seed)
    rep = sequences.validate(seq, req.window)
    return ValidateResponse(
        window=rep.window,
        lambda0_exact=rep.lambda0_exact,
        strictly_increasing=rep.strictly_increasing,
        separation=rep.separation,
        separation_floor_ok=rep.separation_floor_ok,
        symmetry_budget=rep.symmetry_budget,
        density_ratio=rep.density_ratio,
        root_residual=rep.root_residual,
        passed=rep.passed,
    )


def run_bound(req: BoundRequest) -> BoundResponse:
    seq, f, pl, reg = _plan_pieces(req.config, req.N)
    if reg.kind != "gaussian":
        raise ValueError("explicit bounds are available for the Gaussian regularizer")
    z = req.point.unwrap()
    rect = Rectangle(pl.t_minus, pl.t_plus, z.imag - pl.margin, z.imag + pl.margin)
    floor = genfun.phi_floor(seq, rect, window=pl.window)
    report = bounds_mod.gaussian_bound(f, seq, pl, z, floor)
    return BoundResponse(
        bound_value=report.bound_value,
        c_n_y=report.c_n_y,
        phi_floor=report.phi_floor,
        phi_at_z=report.phi_at_z,
        exp_term=report.exp_term,
        margin=pl.margin,
    )


def run_residue(req: ResidueRequest) -> ResidueResponse:
    seq, f, pl, reg = _plan_pieces(req.config, req.N)
    z = req.point.unwrap()
    rect = Rectangle(pl.t_minus, pl.t_plus, z.imag - req.height, z.imag + req.height)
    spec = oracle.ContourSpec(rect=rect, tol=req.tol)
    sides = oracle.side_decomposition(f, seq, pl, reg, z, spec)
    phi_z = genfun.phi(seq, z, pl.window).value
    contour = complex(phi_z / (2j * math.pi) * sides.oriented_sum)
    direct = complex(f.eval(z)) - complex(
        reconstruction.reconstruct(f, seq, pl, reg, z)
    )
    rel = float(abs(direct - contour) / max(abs(direct), 1e-300))
    floor = genfun.phi_floor(seq, rect, window=pl.window)
    limits = oracle.side_bound_limits(f, seq, pl, reg, z, spec, floor)
    magnitudes = {
        "hor_plus": abs(sides.hor_plus),
        "hor_minus": abs(sides.hor_minus),
        "ver_plus": abs(sides.ver_plus),
        "ver_minus": abs(sides.ver_minus),
    }
    limits_ok = all(magnitudes[k] <= limits[k] for k in magnitudes)
    return ResidueResponse(
        direct=ComplexPoint.wrap(direct),
        contour=ComplexPoint.wrap(contour),
        rel_deviation=rel,
        sides=SideModel(
            hor_plus=ComplexPoint.wrap(sides.hor_plus),
            hor_minus=ComplexPoint.wrap(sides.hor_minus),
            ver_plus=ComplexPoint.wrap(sides.ver_plus),
            ver_minus=ComplexPoint.wrap(sides.ver_minus),
        ),
        side_limits=limits,
        side_limits_ok=limits_ok,
        quadrature_error_estimate=sides.error_estimate,
        passed=rel <= req.gate,
    )


def run_laplace(req: LaplaceRequest) -> LaplaceResponse:
    ratio = oracle.laplace_asymptotic_check(req.m, req.N)
    return LaplaceResponse(ratio=ratio, passed=req.lo <= ratio <= req.hi)


# path -> (request model or None, handler, response model)
ROUTES = {
    "/health": (None, health, HealthResponse),
    "/sweep": (SweepRequest, run_sweep, SweepResponse),
    "/reconstruct": (ReconstructRequest, run_reconstruct, ReconstructResponse),
    "/sequence/table": (SequenceTableRequest, run_sequence_table, SequenceTableResponse),
    "/sequence/validate": (ValidateRequest, run_validate, ValidateResponse),
    "/bound": (BoundRequest, run_bound, BoundResponse),
    "/verify/residue": (ResidueRequest, run_residue, ResidueResponse),
    "/verify/laplace": (LaplaceRequest, run_laplace, LaplaceResponse),
}


def create_app() -> FastAPI:
    app = FastAPI(title="nusamp service", version=__version__)

    @app.exception_handler(ValueError)
    async def _domain_error(_: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(harness.FitError)
    async def _fit_error(_: Request, exc: harness.FitError) -> JSONResponse:
        return JSONResponse(status_code=409, content={"detail": str(exc)})

    @app.exception_handler(oracle.QuadratureError)
    async def _quad_error(_: Request, exc: oracle.QuadratureError) -> JSONResponse:
        return JSONResponse(status_code=409, content={"detail": str(exc)})

    @app.get("/health", response_model=HealthResponse)
    def get_health():
        return health()

    @app.post("/sweep", response_model=SweepResponse)
    def post_sweep(req: SweepRequest):
        return run_sweep(req)

    @app.post("/reconstruct", response_model=ReconstructResponse)
    def post_reconstruct(req: ReconstructRequest):
        return run_reconstruct(req)

    @app.post("/sequence/table", response_model=SequenceTableResponse)
    def post_table(req: SequenceTableRequest):
        return run_sequence_table(req)

    @app.post("/sequence/validate", response_model=ValidateResponse)
    def post_validate(req: ValidateRequest):
        return run_validate(req)

    @app.post("/bound", response_model=BoundResponse)
    def post_bound(req: BoundRequest):
        return run_bound(req)

    @app.post("/verify/residue", response_model=ResidueResponse)
    def post_residue(req: ResidueRequest):
        return run_residue(req)

    @app.post("/verify/laplace", response_model=LaplaceResponse)
    def post_laplace(req: LaplaceRequest):
        return run_laplace(req)

    return app


app = create_app()
