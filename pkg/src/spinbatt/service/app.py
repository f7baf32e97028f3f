"""FastAPI endpoints exposing the battery laboratory.

Error contract: malformed or semantically invalid requests return 422
(pydantic validation or ValueError from the core), numerical failures such
as an exhausted search window return 400.  The CLI maps these onto its
usage/numeric exit codes.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..analytics import (
    ChargingReport,
    collapse_curve,
    default_window,
    equal_parameter_scan,
    find_charging_time,
    scaling_fit,
)
from ..dynamics import sample_trajectory
from ..errors import NumericsError, SearchWindowError
from ..model import ModelParams
from ..oracle import verify_reduction
from ..sweep import parse_sweep_spec, run_sweep
from . import schemas

app = FastAPI(
    title="spinbatt",
    version=__version__,
    description="Central-spin quantum battery charging laboratory",
)


def _params(req: schemas.ParamsRequest) -> ModelParams:
    return ModelParams(
        n_b=req.n_b, n_c=req.n_c, m=req.m, coupling=req.coupling, omega=req.omega
    )


def _guarded(fn):
    try:
        return fn()
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    except (SearchWindowError, NumericsError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


def _report_response(report: ChargingReport) -> schemas.ChargingReportResponse:
    pred = report.prediction
    law = None
    if pred.delta_e_law is not None:
        law = schemas.CosineLawResponse(
            amplitude=pred.delta_e_law.amplitude,
            frequency=pred.delta_e_law.frequency,
        )
    p = report.params
    return schemas.ChargingReportResponse(
        params=schemas.ParamsRequest(
            n_b=p.n_b, n_c=p.n_c, m=p.m, coupling=p.coupling, omega=p.omega
        ),
        t_charge=report.t_charge,
        delta_e_max=report.delta_e_max,
        eta_max=report.eta_max,
        p_collective=report.p_collective,
        p_single=report.p_single,
        p_parallel=report.p_parallel,
        gamma=report.gamma,
        t_deviation=report.t_deviation,
        prediction=schemas.PredictionResponse(
            regime=schemas.RegimeResponse(
                label=pred.regime.label.value,
                k=pred.regime.k,
                ratio_threshold=pred.regime.ratio_threshold,
            ),
            t_charge=pred.t_charge,
            rabi_frequency=pred.rabi_frequency,
            delta_e_law=law,
            optimal_storage_expected=pred.optimal_storage_expected,
            su2_expected=pred.su2_expected,
        ),
    )


@app.get("/health", response_model=schemas.HealthResponse)
def health() -> schemas.HealthResponse:
    return schemas.HealthResponse(status="ok", version=__version__)


@app.post("/simulate", response_model=schemas.TrajectoryResponse)
def simulate(req: schemas.SimulateRequest) -> schemas.TrajectoryResponse:
    def work():
        params = _params(req)
        t_max = req.t_max if req.t_max is not None else default_window(params)
        traj = sample_trajectory(params, t_max, req.samples, populations=req.populations)
        return schemas.TrajectoryResponse(
            params=schemas.ParamsRequest(
                n_b=params.n_b, n_c=params.n_c, m=params.m,
                coupling=params.coupling, omega=params.omega,
            ),
            times=traj.times.tolist(),
            delta_e=traj.delta_e.tolist(),
            eta=traj.eta.tolist(),
            populations=None if traj.populations is None else traj.populations.tolist(),
        )

    return _guarded(work)


@app.post("/report", response_model=schemas.ChargingReportResponse)
def report(req: schemas.ReportRequest) -> schemas.ChargingReportResponse:
    return _guarded(
        lambda: _report_response(
            find_charging_time(_params(req), window=req.window, threshold=req.threshold)
        )
    )


@app.post("/sweep", response_model=schemas.SweepResponse)
def sweep(req: schemas.SweepRequest) -> schemas.SweepResponse:
    def work():
        spec = parse_sweep_spec(req.spec)
        result = run_sweep(spec, jobs=req.jobs)
        return schemas.SweepResponse(columns=result.columns, rows=result.rows)

    return _guarded(work)


@app.post("/scaling", response_model=schemas.ScalingResponse)
def scaling(req: schemas.ScalingRequest) -> schemas.ScalingResponse:
    def work():
        points = equal_parameter_scan(
            req.n_values, window=req.window, threshold=req.threshold
        )
        fit = scaling_fit(points)
        return schemas.ScalingResponse(
            points=points,
            exponent=fit.exponent,
            prefactor=fit.prefactor,
            r_squared=fit.r_squared,
        )

    return _guarded(work)


@app.post("/collapse", response_model=schemas.CollapseResponse)
def collapse(req: schemas.CollapseRequest) -> schemas.CollapseResponse:
    def work():
        curves = []
        for n_b in req.n_b_values:
            points = collapse_curve(
                n_b,
                req.ratios,
                m_equals_n_b=req.m_equals_n_b,
                window=req.window,
                threshold=req.threshold,
            )
            curves.append(
                schemas.CollapseCurveResponse(
                    n_b=n_b,
                    points=[
                        schemas.CollapsePoint(
                            ratio=ratio, n_c=round(ratio * n_b), eta_max=eta
                        )
                        for ratio, eta in points
                    ],
                )
            )
        return schemas.CollapseResponse(curves=curves)

    return _guarded(work)


@app.post("/verify", response_model=schemas.VerifyResponse)
def verify(req: schemas.VerifyRequest) -> schemas.VerifyResponse:
    def work():
        result = verify_reduction(req.max_spins, n_times=req.samples, t_max=req.t_max)
        return schemas.VerifyResponse(
            max_spins=result.max_spins,
            cases=result.cases,
            tolerance=result.tolerance,
            worst=schemas.VerifyCaseResponse(
                n_b=result.worst.n_b,
                n_c=result.worst.n_c,
                m=result.worst.m,
                deviation=result.worst.deviation,
            ),
            passed=result.passed,
        )

    return _guarded(work)
