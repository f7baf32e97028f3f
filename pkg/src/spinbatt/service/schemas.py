"""Pydantic request/response models for the service endpoints."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field, model_validator


class ParamsRequest(BaseModel):
    n_b: int = Field(ge=1, description="battery cells")
    n_c: int = Field(ge=1, description="charger units")
    m: int = Field(ge=1, description="initially excited charger units")
    coupling: float = Field(default=1.0, gt=0)
    omega: float = Field(default=1.0, gt=0)

    @model_validator(mode="after")
    def _excitations_fit_charger(self):
        if self.m > self.n_c:
            raise ValueError(f"m={self.m} cannot exceed n_c={self.n_c}")
        return self


class SimulateRequest(ParamsRequest):
    t_max: Optional[float] = Field(default=None, gt=0)
    samples: int = Field(default=2001, ge=2)
    populations: bool = False


class TrajectoryResponse(BaseModel):
    params: ParamsRequest
    times: list[float]
    delta_e: list[float]
    eta: list[float]
    populations: Optional[list[list[float]]] = None


class ReportRequest(ParamsRequest):
    window: Optional[float] = Field(default=None, gt=0)
    threshold: float = Field(default=10.0, gt=1)


class RegimeResponse(BaseModel):
    label: str
    k: float
    ratio_threshold: float


class CosineLawResponse(BaseModel):
    amplitude: float
    frequency: float


class PredictionResponse(BaseModel):
    regime: RegimeResponse
    t_charge: Optional[float]
    rabi_frequency: Optional[float]
    delta_e_law: Optional[CosineLawResponse]
    optimal_storage_expected: bool
    su2_expected: bool


class ChargingReportResponse(BaseModel):
    params: ParamsRequest
    t_charge: float
    delta_e_max: float
    eta_max: float
    p_collective: float
    p_single: Optional[float]
    p_parallel: Optional[float]
    gamma: Optional[float]
    t_deviation: Optional[float]
    prediction: PredictionResponse


class SweepRequest(BaseModel):
    spec: dict[str, Any]
    jobs: Optional[int] = Field(default=None, ge=1)


class SweepResponse(BaseModel):
    columns: list[str]
    rows: list[dict[str, Optional[int | float | str]]]


class ScalingRequest(BaseModel):
    n_values: list[int] = Field(min_length=3)
    window: Optional[float] = Field(default=None, gt=0)
    threshold: float = Field(default=10.0, gt=1)


class ScalingResponse(BaseModel):
    points: list[tuple[int, float]]
    exponent: float
    prefactor: float
    r_squared: float


class CollapseRequest(BaseModel):
    n_b_values: list[int] = Field(min_length=1)
    ratios: list[float] = Field(min_length=1)
    m_equals_n_b: bool = True
    window: Optional[float] = Field(default=None, gt=0)
    threshold: float = Field(default=10.0, gt=1)


class CollapsePoint(BaseModel):
    ratio: float
    n_c: int
    eta_max: float


class CollapseCurveResponse(BaseModel):
    n_b: int
    points: list[CollapsePoint]


class CollapseResponse(BaseModel):
    curves: list[CollapseCurveResponse]


class VerifyRequest(BaseModel):
    max_spins: int = Field(ge=2, le=14)
    samples: int = Field(default=100, ge=2)
    t_max: float = Field(default=10.0, gt=0)


class VerifyCaseResponse(BaseModel):
    n_b: int
    n_c: int
    m: int
    deviation: float


class VerifyResponse(BaseModel):
    max_spins: int
    cases: int
    tolerance: float
    worst: VerifyCaseResponse
    passed: bool


class HealthResponse(BaseModel):
    status: str
    version: str
