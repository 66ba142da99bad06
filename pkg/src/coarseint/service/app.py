"""HTTP front end: one POST endpoint per command plus a health probe.

Responses are the same canonical report JSON the CLI prints, rendered
with sorted keys.  Violated preconditions map to 400 and undecided
comparisons to 409 so thin clients can translate them back into exit
codes without parsing messages.
"""

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response

from .. import __version__
from ..rectify import RectifyError
from ..spectra import UndecidedError
from .handlers import canonical_report_json, dispatch
from .schemas import (
    CompareRequest,
    ContinuityRequest,
    DefectRequest,
    DistRequest,
    InverseSeqRequest,
    LenRequest,
    NonproperRequest,
    OracleCheckRequest,
    PartitionRequest,
    ProfiniteSpectrumRequest,
    QStarRequest,
    RectifyRequest,
    RepRequest,
    SpectrumRequest,
    WitnessRequest,
)

__all__ = ["create_app"]


def _report_response(command: str, payload) -> Response:
    report = dispatch(command, payload)
    return Response(
        content=canonical_report_json(report), media_type="application/json"
    )


def create_app() -> FastAPI:
    app = FastAPI(title="coarseint", version=__version__)

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(RectifyError)
    async def _rectify_error(request: Request, exc: RectifyError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(UndecidedError)
    async def _undecided(request: Request, exc: UndecidedError) -> JSONResponse:
        return JSONResponse(
            status_code=409, content={"detail": str(exc), "verdict": "UNDECIDED"}
        )

    @app.get("/v1/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/v1/rep")
    def rep(payload: RepRequest) -> Response:
        return _report_response("rep", payload)

    @app.post("/v1/len")
    def length(payload: LenRequest) -> Response:
        return _report_response("len", payload)

    @app.post("/v1/dist")
    def dist(payload: DistRequest) -> Response:
        return _report_response("dist", payload)

    @app.post("/v1/oracle-check")
    def oracle_check(payload: OracleCheckRequest) -> Response:
        return _report_response("oracle-check", payload)

    @app.post("/v1/defect")
    def defect(payload: DefectRequest) -> Response:
        return _report_response("defect", payload)

    @app.post("/v1/witness")
    def witness(payload: WitnessRequest) -> Response:
        return _report_response("witness", payload)

    @app.post("/v1/spectrum")
    def spectrum_cmd(payload: SpectrumRequest) -> Response:
        return _report_response("spectrum", payload)

    @app.post("/v1/compare")
    def compare(payload: CompareRequest) -> Response:
        return _report_response("compare", payload)

    @app.post("/v1/qstar")
    def qstar(payload: QStarRequest) -> Response:
        return _report_response("qstar", payload)

    @app.post("/v1/inverse-seq")
    def inverse_seq(payload: InverseSeqRequest) -> Response:
        return _report_response("inverse-seq", payload)

    @app.post("/v1/nonproper")
    def nonproper(payload: NonproperRequest) -> Response:
        return _report_response("nonproper", payload)

    @app.post("/v1/continuity")
    def continuity(payload: ContinuityRequest) -> Response:
        return _report_response("continuity", payload)

    @app.post("/v1/profinite-spectrum")
    def profinite_spectrum(payload: ProfiniteSpectrumRequest) -> Response:
        return _report_response("profinite-spectrum", payload)

    @app.post("/v1/partition")
    def partition(payload: PartitionRequest) -> Response:
        return _report_response("partition", payload)

    @app.post("/v1/rectify")
    def rectify(payload: RectifyRequest) -> Response:
        return _report_response("rectify", payload)

    return app
