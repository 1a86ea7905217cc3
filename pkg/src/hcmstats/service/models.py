"""Request and response models of the HTTP API."""

from __future__ import annotations

from typing import Union

from pydantic import BaseModel, ConfigDict, Field

from ..config import (
    DEFAULT_M_GRID,
    DEFAULT_PHI_GRID,
    ContextConfig,
    GridSpec,
    Normalization,
    Scenario,
)

Cell = Union[float, int, bool, str, None]


class TableResponse(BaseModel):
    """Column-oriented result; ``meta`` carries the CSV header lines."""

    columns: list[str]
    rows: list[list[Cell]]
    meta: dict[str, str]


class PdfRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    config: ContextConfig
    m_grid: GridSpec = DEFAULT_M_GRID
    normalization: Normalization = "sigma12"

    def to_scenario(self) -> Scenario:
        return Scenario(
            task="pdf",
            config=self.config,
            m_grid=self.m_grid,
            normalization=self.normalization,
        )


class MomentsRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    config: ContextConfig

    def to_scenario(self) -> Scenario:
        return Scenario(task="moments", config=self.config)


class ScanPhaseRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    config: ContextConfig
    phi_grid: GridSpec = DEFAULT_PHI_GRID

    def to_scenario(self) -> Scenario:
        return Scenario(task="scan-phase", config=self.config, phi_grid=self.phi_grid)


class NonclassicalityRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    config: ContextConfig

    def to_scenario(self) -> Scenario:
        return Scenario(task="nonclassicality", config=self.config)


class SimulateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    config: ContextConfig
    seed: int = Field(default=12345, ge=0)
    samples: int = Field(default=100_000, ge=1)
    bins: int = Field(default=120, ge=2)
    m_grid: GridSpec = DEFAULT_M_GRID

    def to_scenario(self) -> Scenario:
        return Scenario(
            task="simulate",
            config=self.config,
            seed=self.seed,
            samples=self.samples,
            bins=self.bins,
            m_grid=self.m_grid,
        )


class HealthResponse(BaseModel):
    status: str
    version: str
