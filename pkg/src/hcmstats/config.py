"""Structured-text (JSON) configuration of contexts, states, and scenarios.

The context schema mirrors the measurement device: ``lon`` selects the
network (a preset or a custom 2x3 matrix), ``det`` the two detectors,
``lo`` the local oscillator, and ``signal`` the input state.  Complex
numbers are encoded as ``[re, im]`` pairs.

``lo.phase`` is the *optical* phase phi: the scan parameter of the figures
and the quadrature probed in the cross-correlation scheme.  The physical LO
phase is derived from it (see :mod:`hcmstats.network`), so configurations
read the same way the phase axes of the plots do.
"""

from __future__ import annotations

import math
from typing import Literal, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import ConfigError
from .network import (
    DetectionContext,
    DetectorConfig,
    LocalOscillator,
    LonMatrix,
    build_context,
    make_cross_correlation_lon,
    make_intensity_correlation_lon,
    symmetric_cross_lon,
)
from .states import Coherent, Fock, Gaussian, SignalState

ComplexPair = tuple[float, float]


def _to_complex(pair: ComplexPair) -> complex:
    return complex(pair[0], pair[1])


class LonConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    preset: Literal["cross", "intensity", "custom"] = "cross"
    # cross preset: intensity ratios, realized as T = sqrt(T2), R = i sqrt(R2)
    T2: float | None = None
    R2: float | None = None
    # intensity preset: all four complex splitter amplitudes, no implied phases
    t1: ComplexPair | None = None
    r1: ComplexPair | None = None
    t2: ComplexPair | None = None
    r2: ComplexPair | None = None
    # custom preset: full 2x3 matrix of [re, im] pairs
    matrix: list[list[ComplexPair]] | None = None

    @model_validator(mode="after")
    def _check_preset_fields(self):
        if self.preset == "cross":
            if self.T2 is None or self.R2 is None:
                raise ValueError("lon preset 'cross' requires T2 and R2")
        elif self.preset == "intensity":
            if None in (self.t1, self.r1, self.t2, self.r2):
                raise ValueError("lon preset 'intensity' requires t1, r1, t2, r2")
        elif self.matrix is None:
            raise ValueError("lon preset 'custom' requires matrix")
        return self


class DetectorsConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    eta1: float = 1.0
    eta2: float = 1.0
    nu1: float = 0.0
    nu2: float = 0.0


class LoConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    mag2: float = Field(description="LO intensity |alpha_L|^2")
    phase: float = Field(default=0.0, description="optical phase phi (radians)")


class CoherentSignalConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["coherent"] = "coherent"
    alpha: ComplexPair = (0.0, 0.0)


class GaussianSignalConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["gaussian"] = "gaussian"
    Vx: float
    Vp: float
    phi_xi: float = 0.0
    mean: ComplexPair = (0.0, 0.0)


class FockSignalConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["fock"] = "fock"
    n: int = Field(ge=0)


SignalConfig = Union[CoherentSignalConfig, GaussianSignalConfig, FockSignalConfig]


class ContextConfig(BaseModel):
    """Complete description of one measurement: device plus signal state."""

    model_config = ConfigDict(extra="forbid")

    lon: LonConfig
    det: DetectorsConfig = DetectorsConfig()
    lo: LoConfig
    signal: SignalConfig = Field(discriminator="kind")


class GridSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    start: float
    stop: float
    points: int = Field(ge=2)


DEFAULT_M_GRID = GridSpec(start=-6.0, stop=6.0, points=601)
DEFAULT_PHI_GRID = GridSpec(start=0.0, stop=2.0 * math.pi, points=181)

Normalization = Literal["sigma12", "lo", "lo_plus_mean"]

Task = Literal["pdf", "moments", "scan-phase", "nonclassicality", "simulate", "figure"]


class Scenario(BaseModel):
    """One executable unit of work: a task over a configured measurement."""

    model_config = ConfigDict(extra="forbid")

    task: Task
    config: ContextConfig | None = None
    m_grid: GridSpec = DEFAULT_M_GRID
    phi_grid: GridSpec = DEFAULT_PHI_GRID
    normalization: Normalization = "sigma12"
    seed: int = Field(default=12345, ge=0)
    samples: int = Field(default=100_000, ge=1)
    bins: int = Field(default=120, ge=2)
    figure: int | None = Field(default=None, ge=2, le=7)

    @model_validator(mode="after")
    def _check_task_fields(self):
        if self.task == "figure":
            if self.figure is None:
                raise ValueError("task 'figure' requires the figure number")
        elif self.config is None:
            raise ValueError(f"task {self.task!r} requires a context config")
        return self


class FigureDataset(BaseModel):
    model_config = ConfigDict(extra="forbid")

    label: dict[str, Union[str, int, float]]
    config: ContextConfig


class FigureSpec(BaseModel):
    """A checked-in figure-reproduction scenario: data, not code."""

    model_config = ConfigDict(extra="forbid")

    figure: int
    description: str
    task: Literal["pdf", "scan-phase"]
    normalization: Normalization
    m_grid: GridSpec = DEFAULT_M_GRID
    phi_grid: GridSpec = DEFAULT_PHI_GRID
    datasets: list[FigureDataset]


# ---------------------------------------------------------------------------
# builders: configuration -> domain objects
# ---------------------------------------------------------------------------

def build_lon(cfg: LonConfig) -> LonMatrix:
    try:
        if cfg.preset == "cross":
            return symmetric_cross_lon(cfg.T2, cfg.R2)
        if cfg.preset == "intensity":
            return make_intensity_correlation_lon(
                _to_complex(cfg.t1), _to_complex(cfg.r1),
                _to_complex(cfg.t2), _to_complex(cfg.r2),
            )
        rows = [[_to_complex(entry) for entry in row] for row in cfg.matrix]
        return LonMatrix(rows)
    except ValueError as exc:
        raise ConfigError(f"lon: {exc}") from exc


def build_state(cfg: SignalConfig) -> SignalState:
    try:
        if cfg.kind == "coherent":
            return Coherent(alpha=_to_complex(cfg.alpha))
        if cfg.kind == "gaussian":
            return Gaussian(
                v_x=cfg.Vx, v_p=cfg.Vp, phi_xi=cfg.phi_xi, mean=_to_complex(cfg.mean)
            )
        return Fock(n=cfg.n)
    except ValueError as exc:
        raise ConfigError(f"signal: {exc}") from exc


def build_lo(cfg: LoConfig, phi: float | None = None) -> LocalOscillator:
    if cfg.mag2 < 0.0:
        raise ConfigError(f"lo.mag2 must be >= 0, got {cfg.mag2}")
    phase = cfg.phase if phi is None else phi
    return LocalOscillator.for_optical_phase(math.sqrt(cfg.mag2), phase)


def build_measurement(
    cfg: ContextConfig, phi: float | None = None
) -> tuple[DetectionContext, SignalState]:
    """Assemble the detection context and signal state from a configuration.

    ``phi`` overrides the configured optical phase (used by phase scans).
    """
    state = build_state(cfg.signal)
    lon = build_lon(cfg.lon)
    lo = build_lo(cfg.lo, phi)
    try:
        det1 = DetectorConfig(eta=cfg.det.eta1, nu=cfg.det.nu1)
        det2 = DetectorConfig(eta=cfg.det.eta2, nu=cfg.det.nu2)
    except ValueError as exc:
        raise ConfigError(f"det: {exc}") from exc
    ctx = build_context(lon, det1, det2, lo, mean_signal=state.mean)
    return ctx, state


def normalization_constant(
    name: Normalization, cfg: ContextConfig, ctx: DetectionContext
) -> float:
    if name == "sigma12":
        return ctx.sigma_product
    if name == "lo":
        return cfg.lo.mag2
    return cfg.lo.mag2 + abs(ctx.mean_signal) ** 2
