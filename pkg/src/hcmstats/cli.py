"""Command-line client for the correlation-statistics service.

Every subcommand builds the same request model the HTTP API accepts and
either executes it in-process (default) or posts it to a running service
(``--server http://host:port``).  Results are written as CSV: ``# key =
value`` header lines followed by a column header and data rows.

Exit codes: 0 success, 2 configuration error, 3 numerical-validity error,
4 nonconvergence.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from pydantic import ValidationError

from .config import ContextConfig, GridSpec
from .errors import ConfigError, NonconvergenceError, NumericalValidityError
from .runner import FIGURE_NUMBERS, Table, run_figure, run_scenario
from .service.models import (
    MomentsRequest,
    NonclassicalityRequest,
    PdfRequest,
    ScanPhaseRequest,
    SimulateRequest,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VALIDITY = 3
EXIT_NONCONVERGENCE = 4


def _add_common(parser: argparse.ArgumentParser, needs_config: bool = True) -> None:
    if needs_config:
        parser.add_argument("--config", required=True, help="path to a context JSON file")
    parser.add_argument("--out", default=None, help="output CSV path (default: stdout)")
    parser.add_argument("--grid-points", type=int, default=None, help="grid resolution override")
    parser.add_argument("--seed", type=int, default=12345, help="RNG seed (simulate)")
    parser.add_argument("--server", default=None, help="base URL of a running service; "
                        "when given, the command runs as a remote client")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hcmstats",
        description="Correlation statistics of homodyne correlation measurements",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pdf", help="outcome density w(M) on a grid")
    _add_common(p)
    p.add_argument("--m-min", type=float, default=-6.0)
    p.add_argument("--m-max", type=float, default=6.0)
    p.add_argument(
        "--normalization",
        choices=["sigma12", "lo", "lo_plus_mean"],
        default="sigma12",
        help="constant the M axis is normalized by",
    )

    p = sub.add_parser("moments", help="mean, variance, and indicators at the configured phase")
    _add_common(p)

    p = sub.add_parser("scan-phase", help="moments and indicators over an optical-phase grid")
    _add_common(p)
    p.add_argument("--phi-min", type=float, default=0.0)
    p.add_argument("--phi-max", type=float, default=2.0 * math.pi)

    p = sub.add_parser("nonclassicality", help="r and D verdicts for the configured state")
    _add_common(p)

    p = sub.add_parser("simulate", help="photodetection Monte-Carlo histogram vs closed form")
    _add_common(p)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--bins", type=int, default=120)
    p.add_argument("--m-min", type=float, default=-6.0)
    p.add_argument("--m-max", type=float, default=6.0)

    p = sub.add_parser("figure", help="dataset behind one of the reference figures")
    p.add_argument("number", type=int, choices=FIGURE_NUMBERS)
    _add_common(p, needs_config=False)

    return parser


def _load_config(path: str) -> ContextConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return ContextConfig.model_validate(raw)


def _grid(start: float, stop: float, points: int | None, default_points: int) -> GridSpec:
    return GridSpec(start=start, stop=stop, points=points or default_points)


def _build_request(args: argparse.Namespace):
    if args.command == "figure":
        return None
    config = _load_config(args.config)
    if args.command == "pdf":
        return PdfRequest(
            config=config,
            m_grid=_grid(args.m_min, args.m_max, args.grid_points, 601),
            normalization=args.normalization,
        )
    if args.command == "moments":
        return MomentsRequest(config=config)
    if args.command == "scan-phase":
        return ScanPhaseRequest(
            config=config,
            phi_grid=_grid(args.phi_min, args.phi_max, args.grid_points, 181),
        )
    if args.command == "nonclassicality":
        return NonclassicalityRequest(config=config)
    return SimulateRequest(
        config=config,
        seed=args.seed,
        samples=args.samples,
        bins=args.bins,
        m_grid=_grid(args.m_min, args.m_max, None, 2),
    )


_REMOTE_PATHS = {
    "pdf": "/pdf",
    "moments": "/moments",
    "scan-phase": "/scan-phase",
    "nonclassicality": "/nonclassicality",
    "simulate": "/simulate",
}


class _RemoteError(Exception):
    def __init__(self, exit_code: int, message: str):
        super().__init__(message)
        self.exit_code = exit_code


def _run_remote(args: argparse.Namespace, request) -> Table:
    import httpx

    base = args.server.rstrip("/")
    with httpx.Client(base_url=base, timeout=600.0) as client:
        if args.command == "figure":
            params = {"seed": args.seed}
            if args.grid_points:
                params["grid_points"] = args.grid_points
            response = client.get(f"/figures/{args.number}", params=params)
        else:
            response = client.post(
                _REMOTE_PATHS[args.command], json=request.model_dump(mode="json")
            )
    if response.status_code != 200:
        try:
            body = response.json()
        except ValueError:
            body = {}
        kind = body.get("kind", "")
        detail = body.get("detail", response.text)
        code = {
            "config": EXIT_CONFIG,
            "numerical-validity": EXIT_VALIDITY,
            "nonconvergence": EXIT_NONCONVERGENCE,
        }.get(kind, EXIT_CONFIG if response.status_code == 422 else 1)
        raise _RemoteError(code, f"server error ({response.status_code}): {detail}")
    payload = response.json()
    return Table(columns=payload["columns"], rows=payload["rows"], meta=payload["meta"])


def _run_local(args: argparse.Namespace, request) -> Table:
    if args.command == "figure":
        return run_figure(args.number, grid_points=args.grid_points, seed=args.seed)
    return run_scenario(request.to_scenario())


def _format_validation_error(exc: ValidationError) -> str:
    lines = []
    for err in exc.errors():
        path = ".".join(str(p) for p in err["loc"])
        lines.append(f"{path}: {err['msg']}")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        request = _build_request(args)
        table = _run_remote(args, request) if args.server else _run_local(args, request)
    except ValidationError as exc:
        print(f"config error:\n{_format_validation_error(exc)}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalValidityError as exc:
        print(f"numerical-validity error: {exc}", file=sys.stderr)
        return EXIT_VALIDITY
    except NonconvergenceError as exc:
        print(f"nonconvergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except _RemoteError as exc:
        print(str(exc), file=sys.stderr)
        return exc.exit_code

    csv_text = table.to_csv()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
