"""FastAPI service exposing the correlation-statistics computations.

Run with, e.g.::

    uvicorn hcmstats.service.app:app

Error mapping: malformed requests and domain configuration errors return
422, inputs outside the numerical validity regime return 409, and
quadrature nonconvergence returns 500; the body always carries a ``kind``
field ("config", "numerical-validity", "nonconvergence") that thin clients
translate into exit codes.
"""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import ConfigError, NonconvergenceError, NumericalValidityError
from ..runner import Table, run_figure, run_scenario
from .models import (
    HealthResponse,
    MomentsRequest,
    NonclassicalityRequest,
    PdfRequest,
    ScanPhaseRequest,
    SimulateRequest,
    TableResponse,
)

app = FastAPI(
    title="hcmstats",
    version=__version__,
    description=(
        "Full statistics of homodyne correlation measurements: outcome "
        "densities, moments, nonclassicality tests, Monte-Carlo checks, and "
        "figure-reproduction datasets."
    ),
)


@app.exception_handler(ConfigError)
async def _config_error(request, exc: ConfigError):
    return JSONResponse(status_code=422, content={"kind": "config", "detail": str(exc)})


@app.exception_handler(NumericalValidityError)
async def _validity_error(request, exc: NumericalValidityError):
    return JSONResponse(
        status_code=409, content={"kind": "numerical-validity", "detail": str(exc)}
    )


@app.exception_handler(NonconvergenceError)
async def _nonconvergence_error(request, exc: NonconvergenceError):
    return JSONResponse(
        status_code=500, content={"kind": "nonconvergence", "detail": str(exc)}
    )


def _as_response(table: Table) -> TableResponse:
    return TableResponse(columns=table.columns, rows=table.rows, meta=table.meta)


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/pdf", response_model=TableResponse)
def pdf(request: PdfRequest) -> TableResponse:
    return _as_response(run_scenario(request.to_scenario()))


@app.post("/moments", response_model=TableResponse)
def moments(request: MomentsRequest) -> TableResponse:
    return _as_response(run_scenario(request.to_scenario()))


@app.post("/scan-phase", response_model=TableResponse)
def scan_phase(request: ScanPhaseRequest) -> TableResponse:
    return _as_response(run_scenario(request.to_scenario()))


@app.post("/nonclassicality", response_model=TableResponse)
def nonclassicality(request: NonclassicalityRequest) -> TableResponse:
    return _as_response(run_scenario(request.to_scenario()))


@app.post("/simulate", response_model=TableResponse)
def simulate(request: SimulateRequest) -> TableResponse:
    return _as_response(run_scenario(request.to_scenario()))


@app.get("/figures/{figure}", response_model=TableResponse)
def figure(figure: int, grid_points: int | None = None, seed: int | None = None) -> TableResponse:
    return _as_response(run_figure(figure, grid_points=grid_points, seed=seed))
