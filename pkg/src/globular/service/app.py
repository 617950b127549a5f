"""FastAPI application exposing the engine over HTTP.

Run with: uvicorn globular.service.app:app
"""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from ..errors import GlobularError
from . import api
from . import schemas as s

app = FastAPI(
    title="globular",
    description="Pasting schemes, coherator towers and finite weak-groupoid models",
    version="0.1.0",
)


@app.exception_handler(GlobularError)
async def domain_error_handler(request, exc: GlobularError):
    return JSONResponse(
        status_code=422,
        content={"error": str(exc), "kind": type(exc).__name__},
    )


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/enumerate-tables", response_model=s.EnumerateTablesResponse)
def enumerate_tables(req: s.EnumerateTablesRequest):
    return api.enumerate_tables_handler(req)


@app.post("/hom", response_model=s.HomResponse)
def hom(req: s.HomRequest):
    return api.hom_handler(req)


@app.post("/realize", response_model=s.RealizeResponse)
def realize(req: s.RealizeRequest):
    return api.realize_handler(req)


@app.post("/build-coherator", response_model=s.BuildCoheratorResponse)
def build_coherator(req: s.BuildCoheratorRequest):
    return api.build_coherator_handler(req)


@app.post("/derive", response_model=s.DeriveResponse)
def derive(req: s.DeriveRequest):
    return api.derive_handler(req)


@app.post("/eval", response_model=s.EvalResponse)
def eval_(req: s.EvalRequest):
    return api.eval_handler(req)


@app.post("/pi", response_model=s.PiResponse)
def pi(req: s.PiRequest):
    return api.pi_handler(req)


@app.post("/weq", response_model=s.WeqResponse)
def weq(req: s.WeqRequest):
    return api.weq_handler(req)


@app.post("/check-fibrant", response_model=s.CheckFibrantResponse)
def check_fibrant(req: s.CheckFibrantRequest):
    return api.check_fibrant_handler(req)


@app.post("/relayer", response_model=s.RelayerResponse)
def relayer(req: s.RelayerRequest):
    return api.relayer_handler(req)


@app.post("/lift", response_model=s.LiftResponse)
def lift(req: s.LiftRequest):
    return api.lift_handler(req)
