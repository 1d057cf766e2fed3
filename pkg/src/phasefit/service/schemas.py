"""Pydantic request/response models for the compute service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

from ..solver import Potential


class PotentialModel(BaseModel):
    """Layered potential on the wire: parallel radii/values arrays."""

    radii: list[float]
    values: list[float]

    def to_potential(self) -> Potential:
        return Potential.from_layers(self.radii, self.values)

    @classmethod
    def from_potential(cls, p: Potential) -> "PotentialModel":
        return cls(radii=list(p.radii), values=list(p.values))


class ShiftsRequest(BaseModel):
    potential: PotentialModel
    k: float = 3.0
    l_max: int = 20
    method: Literal["matrix", "ode"] = "matrix"
    ode_step_count: int = 20000
    ode_r_start_factor: float = 1e-4


class ShiftsResponse(BaseModel):
    k: float
    l_max: int
    method: str
    delta: list[float]
    # only set for the ode method when the matrix path is also computable
    max_discrepancy: Optional[float] = None


class PhiRequest(BaseModel):
    candidate: PotentialModel
    target: Optional[PotentialModel] = None
    target_delta: Optional[list[float]] = None
    k: float = 3.0
    l_start: int = 1
    l_end: int = 20


class PhiResponse(BaseModel):
    phi: float
    l_start: int
    l_end: int


class SearchSettings(BaseModel):
    L: int = 10000
    gamma: float = 0.01
    seed: int = 1729
    M_max: int = 6
    R: float = 3.0
    q_low: float = 0.0
    q_high: float = 9.0
    eps_r: float = 0.1
    dedup_tol: float = 0.05
    line_tol: float = 1e-5
    f_tol: float = 1e-8
    max_sweeps: int = 50


class SearchRequest(BaseModel):
    target: Optional[PotentialModel] = None
    target_delta: Optional[list[float]] = None
    k: float = 3.0
    l_start: int = 1
    l_end: int = 20
    settings: SearchSettings = Field(default_factory=SearchSettings)
    jobs: int = 1


class MinimumModel(BaseModel):
    phi: float
    radii: list[float]
    values: list[float]
    start_index: int
    seed: int


class SearchResponse(BaseModel):
    minima: list[MinimumModel]
    evaluations: int
    wall_time: float


class CompareRequest(BaseModel):
    candidate: PotentialModel
    original: PotentialModel
    k: float = 3.0
    l_max: int = 20
    l_start: int = 1
    l_end: int = 20
    grid_points: int = 1000


class CompareResponse(BaseModel):
    r: list[float]
    q_candidate: list[float]
    q_original: list[float]
    delta_candidate: list[float]
    delta_original: list[float]
    phi: float
