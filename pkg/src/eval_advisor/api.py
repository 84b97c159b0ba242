"""HTTP interface: thin projections of workspace operations onto JSON.

Bodies are parsed by hand (no schema layer) so every failure funnels
through the same five error codes the engine uses; responses are rendered
with the shared serializer, which keeps them byte-identical to CLI output
for the same snapshot and request.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from eval_advisor.errors import HTTP_STATUS, AdvisorError, FormatError
from eval_advisor.mining import MiningConfig
from eval_advisor.wire import dumps
from eval_advisor.workspace import Workspace


def _json_response(payload, status_code: int = 200) -> Response:
    return Response(
        content=dumps(payload),
        status_code=status_code,
        media_type="application/json",
    )


async def _body(request: Request) -> dict:
    raw = await request.body()
    if not raw:
        raise FormatError("request body must be JSON")
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise FormatError(f"request body is not valid JSON: {exc}") from exc


def create_app(workspace: Workspace) -> FastAPI:
    app = FastAPI(title="eval-advisor", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(AdvisorError)
    async def advisor_error(_request, exc: AdvisorError):
        return _json_response(exc.to_wire(), HTTP_STATUS[exc.code])

    @app.post("/enquiries")
    async def enquiries(request: Request):
        return _json_response(workspace.suggest(await _body(request)))

    @app.post("/retrievals")
    async def retrievals(request: Request):
        body = await _body(request)
        exact = bool(body.pop("exact", False))
        return _json_response(workspace.retrieve(body, exact=exact))

    @app.get("/rules")
    async def rules(origin: str = None, attribute: str = None):
        return _json_response(workspace.rules(origin=origin, attribute=attribute))

    @app.get("/cases")
    async def cases(request: Request, limit: int = None, offset: int = 0):
        item_filters = request.query_params.getlist("item")
        return _json_response(
            workspace.cases(item_filters or None, limit=limit, offset=offset)
        )

    @app.get("/cases/{record_id}")
    async def case(record_id: str):
        return _json_response(workspace.case(record_id))

    @app.post("/cases")
    async def retain(request: Request):
        return _json_response(workspace.retain(await _body(request)), 201)

    @app.post("/feedback")
    async def feedback(request: Request):
        return _json_response(workspace.feedback(await _body(request)), 201)

    @app.post("/admin/mine")
    async def mine(request: Request):
        body = await _body(request)
        exact = bool(body.pop("exact", False))
        config = MiningConfig.from_wire(body)
        return _json_response(workspace.mine(config, exact=exact))

    @app.get("/vocabulary")
    async def vocabulary(attribute: str = None):
        return _json_response(workspace.vocabulary(attribute))

    return app
