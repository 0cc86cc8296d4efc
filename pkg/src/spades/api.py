"""HTTP API for live play sessions.

Endpoints (JSON field names are documented in docs/service-api.md):

    POST /sessions                  create a table, bots act, returns first view
    GET  /sessions/{id}/view        the human player's current view
    POST /sessions/{id}/bid         submit a bid / blind-nil choice
    POST /sessions/{id}/card        submit a card
    GET  /sessions/{id}/events      event backlog (JSON) or live stream (SSE)
    DELETE /sessions/{id}           drop the table

Errors: 404 unknown session, 409 out-of-turn or stale token, 422 illegal
action (state unchanged), 400 bad configuration.
"""

from __future__ import annotations

import asyncio
import json

from fastapi import FastAPI, Header, HTTPException, Query
from fastapi.responses import StreamingResponse
from pydantic import BaseModel, Field

from .cards import SEAT_CHARS
from .curves import SCTable
from .harness import AgentResources
from .service import (
    ActionError,
    PlayService,
    SessionConfig,
    TurnError,
    UnknownSession,
)


class CreateSessionRequest(BaseModel):
    human_seat: str = "S"
    bot_bidder: str = "bis"
    bot_player: str = "srp"
    win_goal: int = 200
    lose_goal: int = -100
    seed: int | None = None
    blind_nil: bool = False
    bot_delay: float = Field(0.0, ge=0.0, le=5.0)


class BidRequest(BaseModel):
    seq: int
    bid: int | None = None
    action: str | None = None  # "peek" or "blind" during a blind-nil offer


class CardRequest(BaseModel):
    seq: int
    card: str


def create_app(
    service: PlayService | None = None,
    sc_table: str | None = None,
    round_log_path: str | None = None,
) -> FastAPI:
    if service is None:
        resources = AgentResources(
            sc_table=SCTable.load(sc_table) if sc_table else None
        )
        service = PlayService(resources, round_log_path=round_log_path)

    app = FastAPI(title="spades play service", version="1.0")
    app.state.service = service

    def get_session(session_id: str):
        try:
            return service.get(session_id)
        except UnknownSession as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc

    def run_action(session, fn) -> dict:
        try:
            fn()
        except TurnError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        except ActionError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return session.view()

    @app.post("/sessions")
    def create_session(req: CreateSessionRequest):
        if req.human_seat not in SEAT_CHARS:
            raise HTTPException(status_code=400, detail="human_seat must be one of N E S W")
        config = SessionConfig(
            human_seat=SEAT_CHARS.index(req.human_seat),
            bot_bidder=req.bot_bidder,
            bot_player=req.bot_player,
            win_goal=req.win_goal,
            lose_goal=req.lose_goal,
            seed=req.seed,
            blind_nil=req.blind_nil,
            bot_delay=req.bot_delay,
        )
        try:
            session = service.create(config)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return {"session": session.id, "view": session.view()}

    @app.get("/sessions/{session_id}/view")
    def get_view(session_id: str):
        return get_session(session_id).view()

    @app.post("/sessions/{session_id}/bid")
    def submit_bid(session_id: str, req: BidRequest):
        session = get_session(session_id)
        seen = req.seq
        view = run_action(
            session,
            lambda: session.submit_bid(
                session.human, req.seq, bid=req.bid, action=req.action
            ),
        )
        return {"view": view, "events": session.events_after(seen)}

    @app.post("/sessions/{session_id}/card")
    def submit_card(session_id: str, req: CardRequest):
        session = get_session(session_id)
        seen = req.seq
        view = run_action(
            session,
            lambda: session.submit_card(session.human, req.seq, req.card),
        )
        return {"view": view, "events": session.events_after(seen)}

    @app.delete("/sessions/{session_id}")
    def drop_session(session_id: str):
        get_session(session_id)
        service.drop(session_id)
        return {"dropped": session_id}

    @app.get("/sessions/{session_id}/events")
    async def events(
        session_id: str,
        after: int = Query(0, ge=0),
        stream: bool = True,
        last_event_id: str | None = Header(None),
    ):
        session = get_session(session_id)
        if last_event_id is not None:  # EventSource reconnect
            try:
                after = max(after, int(last_event_id))
            except ValueError:
                pass
        if not stream:
            return {"events": session.events_after(after), "seq": session.seq}

        delay = session.config.bot_delay

        async def generate():
            last = after
            while True:
                batch = session.events_after(last)
                for event in batch:
                    last = event["seq"]
                    yield (
                        f"id: {event['seq']}\n"
                        f"event: {event['type']}\n"
                        f"data: {json.dumps(event, separators=(',', ':'))}\n\n"
                    )
                    if delay:
                        await asyncio.sleep(delay)
                if session.winner is not None and not session.events_after(last):
                    return
                await asyncio.sleep(0.05)

        return StreamingResponse(generate(), media_type="text/event-stream")

    return app
