"""FastAPI service wrapping the core package.

The handler functions (`run_shifts`, `run_phi`, `run_search`, `run_compare`)
are plain callables on the request/response models; the CLI calls them
in-process and the HTTP routes delegate to them, so both surfaces share one
implementation. Core DomainError maps to HTTP 422, SolverError to 400.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import DomainError, SolverError
from ..localopt import AdmissibleSet, LocalOptParams
from ..objective import ShiftTarget, phi, phi_of_shifts, target_from_potential
from ..ode import OdeSettings, phase_shift_table_ode
from ..search import SearchParams, reduced_random_search
from ..solver import phase_shift_table
from .schemas import (
    CompareRequest,
    CompareResponse,
    MinimumModel,
    PhiRequest,
    PhiResponse,
    SearchRequest,
    SearchResponse,
    ShiftsRequest,
    ShiftsResponse,
)


def run_shifts(req: ShiftsRequest) -> ShiftsResponse:
    p = req.potential.to_potential()
    if req.method == "matrix":
        table = phase_shift_table(p, req.k, req.l_max)
        return ShiftsResponse(k=req.k, l_max=req.l_max, method="matrix", delta=list(table.delta))
    settings = OdeSettings(r_start_factor=req.ode_r_start_factor, step_count=req.ode_step_count)
    table = phase_shift_table_ode(p, req.k, req.l_max, settings)
    discrepancy = None
    try:
        matrix = phase_shift_table(p, req.k, req.l_max)
        discrepancy = float(np.max(np.abs(table.delta - matrix.delta)))
    except SolverError:
        pass  # ode path is more general; no cross-check available
    return ShiftsResponse(
        k=req.k, l_max=req.l_max, method="ode", delta=list(table.delta), max_discrepancy=discrepancy
    )


def _build_target(target_model, target_delta, k: float, l_start: int, l_end: int) -> ShiftTarget:
    if (target_model is None) == (target_delta is None):
        raise DomainError("provide exactly one of: target potential, target shifts")
    if target_model is not None:
        return target_from_potential(target_model.to_potential(), k, l_start, l_end)
    return ShiftTarget(k=k, delta=np.asarray(target_delta, dtype=float), l_start=l_start, l_end=l_end)


def run_phi(req: PhiRequest) -> PhiResponse:
    target = _build_target(req.target, req.target_delta, req.k, req.l_start, req.l_end)
    value = phi(req.candidate.to_potential(), target)
    return PhiResponse(phi=value, l_start=req.l_start, l_end=req.l_end)


def run_search(req: SearchRequest) -> SearchResponse:
    target = _build_target(req.target, req.target_delta, req.k, req.l_start, req.l_end)
    s = req.settings
    params = SearchParams(
        L=s.L,
        gamma=s.gamma,
        seed=s.seed,
        adm=AdmissibleSet(M_max=s.M_max, R=s.R, q_low=s.q_low, q_high=s.q_high),
        local=LocalOptParams(
            epsilon_r=s.eps_r, line_tol=s.line_tol, f_tol=s.f_tol, max_sweeps=s.max_sweeps
        ),
        dedup_tol=s.dedup_tol,
    )
    outcome = reduced_random_search(params, target, jobs=req.jobs)
    return SearchResponse(
        minima=[
            MinimumModel(
                phi=m.phi,
                radii=list(m.config.radii),
                values=list(m.config.values),
                start_index=m.start_index,
                seed=m.seed,
            )
            for m in outcome.minima
        ],
        evaluations=outcome.evaluations,
        wall_time=outcome.wall_time,
    )


def run_compare(req: CompareRequest) -> CompareResponse:
    candidate = req.candidate.to_potential()
    original = req.original.to_potential()
    if req.grid_points < 2:
        raise DomainError(f"grid_points must be at least 2, got {req.grid_points}")
    r = np.linspace(0.0, max(candidate.support_radius, original.support_radius), req.grid_points)
    table_c = phase_shift_table(candidate, req.k, req.l_max)
    table_o = phase_shift_table(original, req.k, req.l_max)
    target = ShiftTarget(k=req.k, delta=table_o.delta, l_start=req.l_start,
                         l_end=min(req.l_end, req.l_max))
    return CompareResponse(
        r=list(r),
        q_candidate=list(candidate.profile(r)),
        q_original=list(original.profile(r)),
        delta_candidate=list(table_c.delta),
        delta_original=list(table_o.delta),
        phi=phi_of_shifts(table_c.delta, target),
    )


app = FastAPI(title="phasefit", version=__version__)


@app.exception_handler(DomainError)
async def _domain_error(request: Request, exc: DomainError):
    return JSONResponse(status_code=422, content={"detail": {"kind": "validation", "message": str(exc)}})


@app.exception_handler(SolverError)
async def _solver_error(request: Request, exc: SolverError):
    return JSONResponse(status_code=400, content={"detail": {"kind": "solver", "message": str(exc)}})


@app.get("/healthz")
def healthz():
    return {"status": "ok", "version": __version__}


@app.post("/shifts", response_model=ShiftsResponse)
def shifts_endpoint(req: ShiftsRequest) -> ShiftsResponse:
    return run_shifts(req)


@app.post("/phi", response_model=PhiResponse)
def phi_endpoint(req: PhiRequest) -> PhiResponse:
    return run_phi(req)


@app.post("/search", response_model=SearchResponse)
def search_endpoint(req: SearchRequest) -> SearchResponse:
    return run_search(req)


@app.post("/compare", response_model=CompareResponse)
def compare_endpoint(req: CompareRequest) -> CompareResponse:
    return run_compare(req)
