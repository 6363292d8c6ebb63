"""HTTP facade over the problem runner.

POST /v1/dist and /v1/check take the same JSON documents as the CLI and
return the same result documents (including their ``exit_code`` field);
invalid mathematical input maps to HTTP 422.
"""

from __future__ import annotations

from fastapi import Body, FastAPI, HTTPException

from . import __version__
from .errors import BjApproxError
from .problems import BenchRequest, CheckProblem, DistProblem
from .runner import run_bench, run_check, run_dist


def create_app() -> FastAPI:
    app = FastAPI(title="bjapprox", version=__version__)

    @app.post("/v1/dist")
    def dist(problem: DistProblem = Body(...)) -> dict:
        try:
            return run_dist(problem)
        except BjApproxError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc

    @app.post("/v1/check")
    def check(problem: CheckProblem = Body(...)) -> dict:
        try:
            return run_check(problem)
        except BjApproxError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc

    @app.post("/v1/bench")
    def bench(request: BenchRequest | None = Body(default=None)) -> dict:
        options = request.options if request is not None else BenchRequest().options
        try:
            return run_bench(options)
        except BjApproxError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc

    @app.get("/v1/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    return app


app = create_app()
