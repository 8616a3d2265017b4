"""Command-line client for the reconstruction service.

Every subcommand builds a request model, sends it through the service layer,
and renders the response. By default requests dispatch to the in-process
handlers; ``--server URL`` sends them to a running instance over HTTP instead.

Exit codes: 0 success, 1 failed verification (bound dominance, oracle
deviation, out-of-band ratio, insufficient fit), 2 usage or configuration
error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from pydantic import BaseModel, ValidationError

from . import service
from .harness import FitError
from .oracle import QuadratureError

__all__ = ["main", "run_cli"]

EXIT_OK = 0
EXIT_FAILED_CHECK = 1
EXIT_CONFIG = 2


class ServiceError(RuntimeError):
    def __init__(self, status: int, detail: str) -> None:
        super().__init__(detail)
        self.status = status
        self.detail = detail


class LocalClient:
    """Dispatches requests straight to the service handlers."""

    def call(self, path: str, request: BaseModel | None) -> BaseModel:
        _, handler, _ = service.ROUTES[path]
        try:
            return handler(request) if request is not None else handler()
        except (FitError, QuadratureError) as exc:
            raise ServiceError(409, str(exc)) from exc
        except ValueError as exc:
            raise ServiceError(422, str(exc)) from exc


class RemoteClient:
    """Sends requests to a running service over HTTP."""

    def __init__(self, base_url: str) -> None:
        import httpx

        self._client = httpx.Client(base_url=base_url, timeout=600.0)

    def call(self, path: str, request: BaseModel | None) -> BaseModel:
        _, _, response_cls = service.ROUTES[path]
        if request is None:
            resp = self._client.get(path)
        else:
            resp = self._client.post(path, json=request.model_dump(mode="json"))
        if resp.status_code >= 400:
            try:
                detail = resp.json().get("detail", resp.text)
            except Exception:
                detail = resp.text
            raise ServiceError(resp.status_code, str(detail))
        return response_cls.model_validate(resp.json())


def _load_config(path: str) -> service.ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return service.ExperimentConfig.model_validate(json.load(fh))


def _parse_complex(text: str) -> complex:
    return complex(text.replace("i", "j").replace(" ", ""))


def _resolve_threads(args) -> int | None:
    if getattr(args, "threads", None) is not None:
        return args.threads
    env = os.environ.get("NUSAMP_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ServiceError(422, f"NUSAMP_THREADS must be an integer, got {env!r}")
    return None


def _client(args):
    if getattr(args, "server", None):
        return RemoteClient(args.server)
    return LocalClient()


def _print_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


# ---------------------------------------------------------------------------
# Subcommands


def cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    req = service.SweepRequest(config=cfg, threads=_resolve_threads(args))
    resp = _client(args).call("/sweep", req)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "sweep.csv").write_text(resp.csv_text, encoding="utf-8")
    summary = resp.model_dump(mode="json", exclude={"csv_text"})
    (out_dir / "summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(
        f"sweep: fitted slope {resp.fitted_slope:.6f} vs predicted "
        f"{resp.predicted_slope:.6f} (rel dev {resp.slope_rel_dev:.3f}); "
        f"{len(resp.rows)} rows -> {out_dir}"
    )
    if resp.dominance_checked and resp.dominance_violations > 0:
        print(f"bound dominance violated at {resp.dominance_violations} grid points")
        return EXIT_FAILED_CHECK
    if resp.monotonicity_violations > 1:
        print(f"monotonicity violated on {resp.monotonicity_violations} steps")
        return EXIT_FAILED_CHECK
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    cfg = _load_config(args.config)
    z = _parse_complex(args.z)
    req = service.ReconstructRequest(
        config=cfg,
        N=args.N,
        point=service.ComplexPoint(re=z.real, im=z.imag),
        recenter=args.recenter,
    )
    resp = _client(args).call("/reconstruct", req)
    _print_json(resp.model_dump(mode="json"))
    return EXIT_OK


def cmd_generate_sequence(args) -> int:
    cfg = _load_config(args.config)
    req = service.SequenceTableRequest(config=cfg, n_min=args.n_min, n_max=args.n_max)
    resp = _client(args).call("/sequence/table", req)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(resp.csv_text, encoding="utf-8")
        print(f"wrote {len(resp.indices)} nodes -> {args.out}")
    else:
        sys.stdout.write(resp.csv_text)
    return EXIT_OK


def cmd_bound(args) -> int:
    cfg = _load_config(args.config)
    z = _parse_complex(args.z)
    req = service.BoundRequest(
        config=cfg, N=args.N, point=service.ComplexPoint(re=z.real, im=z.imag)
    )
    resp = _client(args).call("/bound", req)
    _print_json(resp.model_dump(mode="json"))
    return EXIT_OK


def cmd_verify_residue(args) -> int:
    cfg = _load_config(args.config)
    z = _parse_complex(args.z)
    req = service.ResidueRequest(
        config=cfg,
        N=args.N,
        point=service.ComplexPoint(re=z.real, im=z.imag),
        tol=args.tol,
        height=args.height,
    )
    resp = _client(args).call("/verify/residue", req)
    direct = complex(resp.direct.re, resp.direct.im)
    contour = complex(resp.contour.re, resp.contour.im)
    print(f"direct error:  {direct}")
    print(f"contour error: {contour}")
    print(f"relative deviation: {resp.rel_deviation:.3e}")
    print(f"side envelopes hold: {resp.side_limits_ok}")
    if not resp.passed or not resp.side_limits_ok:
        return EXIT_FAILED_CHECK
    return EXIT_OK


def cmd_verify_laplace(args) -> int:
    req = service.LaplaceRequest(m=args.m, N=args.N)
    resp = _client(args).call("/verify/laplace", req)
    print(f"ratio: {resp.ratio:.6f}")
    return EXIT_OK if resp.passed else EXIT_FAILED_CHECK


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run(service.app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nusamp",
        description="Reconstruct band-limited signals from nonuniform samples "
        "and verify the convergence theory numerically.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config=True):
        if config:
            p.add_argument("--config", required=True, help="JSON experiment config")
        p.add_argument("--server", help="base URL of a running service (default: in-process)")

    p = sub.add_parser("sweep", help="convergence sweep over window indices")
    common(p)
    p.add_argument("--out", default="out", help="output directory (CSV + JSON summary)")
    p.add_argument("--threads", type=int, help="worker threads (env NUSAMP_THREADS as fallback)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("reconstruct", help="evaluate the series at one point")
    common(p)
    p.add_argument("--N", type=int, required=True, help="sample window index")
    p.add_argument("--z", required=True, help="evaluation point, e.g. 0.37 or 0.3+0.2j")
    p.add_argument("--recenter", action="store_true", help="re-index so the nearest node is 0")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("generate-sequence", help="dump a node table")
    common(p)
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_generate_sequence)

    p = sub.add_parser("bound", help="explicit error bound at one point")
    common(p)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--z", required=True)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify-residue", help="contour integral vs direct error")
    common(p)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--z", required=True)
    p.add_argument("--tol", type=float, default=1e-10, help="per-side quadrature tolerance")
    p.add_argument("--height", type=float, default=2.5, help="rectangle half-height")
    p.set_defaults(func=cmd_verify_residue)

    p = sub.add_parser("verify-laplace", help="ridge integral vs asymptotic law")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--N", type=float, required=True)
    p.add_argument("--server", help="base URL of a running service")
    p.set_defaults(func=cmd_verify_laplace)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ServiceError as exc:
        print(f"error: {exc.detail}", file=sys.stderr)
        return EXIT_CONFIG if exc.status == 422 else EXIT_FAILED_CHECK
    except ValidationError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except json.JSONDecodeError as exc:
        print(f"config is not valid JSON: {exc}", file=sys.stderr)
        return EXIT_CONFIG


run_cli = main
