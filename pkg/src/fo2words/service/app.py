"""HTTP service exposing evaluation, games, extraction and the suites.

Game sessions live in memory with idle expiry and a single-writer rule:
concurrent mutations of one session answer 409.  All game legality is
decided here; clients only render what they are told.
"""

from __future__ import annotations

import threading
import time
import uuid
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .. import formula as F
from ..efgame import (
    DUPLICATOR,
    SPOILER,
    GameSession,
    GameSpec,
    IllegalMove,
    ResourceGuard,
    estimate_cost,
    solve,
    strategy_table,
)
from ..evaluator import EvalError, LanguageOracle, check_neutral, evaluate, evaluate_open
from ..harness import run_suite
from ..locality import CeilingExceeded, LocalityError, NeighborGraph, find_extraction
from ..postypes import type_to_text, type_vector, well_typed_extraction
from ..predicates import PredicateError, parse_signature
from . import schemas as S

SESSION_TTL_SECONDS = 1800
SESSION_BUDGET = 10**7  # interactive games are solver-backed; keep them snappy


class _Session:
    def __init__(self, game: GameSession, human_role: str):
        self.game = game
        self.human_role = human_role
        self.lock = threading.Lock()
        self.touched = time.time()


def create_app() -> FastAPI:
    app = FastAPI(title="fo2words", version="0.1.0")
    sessions: dict = {}
    app.state.sessions = sessions

    # -- helpers

    def _purge() -> None:
        now = time.time()
        for sid in [s for s, v in sessions.items() if now - v.touched > SESSION_TTL_SECONDS]:
            sessions.pop(sid, None)

    def _get(sid: str) -> _Session:
        _purge()
        got = sessions.get(sid)
        if got is None:
            raise HTTPException(status_code=404, detail="unknown game id")
        got.touched = time.time()
        return got

    def _sig(text: str):
        try:
            return parse_signature(text)
        except (PredicateError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=f"bad signature: {exc}")

    def _formula(text: str):
        try:
            return F.parse(text)
        except F.ParseError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    def _state(sess: _Session) -> S.GameStateModel:
        g = sess.game
        st = g.state
        pending = None
        if g.pending is not None:
            pending = {"side": g.pending[0], "position": g.pending[1]}
        allowed_u = allowed_v = None
        if g.winner is None:
            r = st.rounds_used + 1
            wu, wv = g.spec.window("u", r), g.spec.window("v", r)
            if len(wu) <= 4096:
                allowed_u = list(wu)
            if len(wv) <= 4096:
                allowed_v = list(wv)
        return S.GameStateModel(
            words=S.Words(u=g.spec.u, v=g.spec.v),
            pebbles=S.Pebbles(
                previous=list(st.prev) if st.prev else None,
                current=list(st.cur) if st.cur else None,
            ),
            roundsUsed=st.rounds_used,
            alternationsUsed=st.alts_used,
            turn=g.turn,
            winner=g.winner,
            reason=g.reason,
            pending=pending,
            humanRole=sess.human_role,
            rounds=g.spec.rounds,
            alternations=g.spec.alternations,
            allowedU=allowed_u,
            allowedV=allowed_v,
        )

    def _engine_turns(sess: _Session) -> None:
        g = sess.game
        engine = SPOILER if sess.human_role == DUPLICATOR else DUPLICATOR
        while g.winner is None and g.turn == engine:
            g.engine_move()

    # -- sessions

    @app.post("/games", response_model=S.CreateGameResponse)
    def create_game(req: S.CreateGameRequest):
        sig = _sig(req.sig)
        spec = GameSpec(u=req.u, v=req.v, rounds=req.s, alternations=req.m, sig=sig)
        if estimate_cost(spec) > SESSION_BUDGET:
            raise HTTPException(status_code=400, detail="game too large for a live session")
        game = GameSession(spec=spec)
        sess = _Session(game, req.humanRole)
        try:
            _engine_turns(sess)
        except ResourceGuard as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        sid = uuid.uuid4().hex
        sessions[sid] = sess
        return S.CreateGameResponse(id=sid, state=_state(sess))

    @app.get("/games/{sid}", response_model=S.StateResponse)
    def get_game(sid: str):
        sess = _get(sid)
        return S.StateResponse(state=_state(sess))

    @app.post("/games/{sid}/moves", response_model=S.MoveResponse)
    def post_move(sid: str, req: S.MoveRequest):
        sess = _get(sid)
        if not sess.lock.acquire(blocking=False):
            raise HTTPException(status_code=409, detail="session busy")
        try:
            g = sess.game
            try:
                g.apply_move(sess.human_role, req.side, req.position)
            except IllegalMove as exc:
                raise HTTPException(status_code=422, detail=str(exc))
            _engine_turns(sess)
            verdict = None
            if g.winner is not None:
                verdict = S.Verdict(winner=g.winner, reason=g.reason)
            return S.MoveResponse(state=_state(sess), verdict=verdict)
        finally:
            sess.lock.release()

    @app.get("/games/{sid}/hint", response_model=S.HintResponse)
    def get_hint(sid: str):
        sess = _get(sid)
        g = sess.game
        if g.winner is not None:
            raise HTTPException(status_code=422, detail="game is over")
        if g.turn != sess.human_role:
            raise HTTPException(status_code=422, detail="not your turn")
        side, pos, winning = g.hint()
        return S.HintResponse(side=side, position=pos, winning=winning)

    # -- batch operations

    @app.post("/eval", response_model=S.EvalResponse)
    def post_eval(req: S.EvalRequest):
        f = _formula(req.formula)
        sig = _sig(req.sig)
        try:
            if req.position is None:
                return S.EvalResponse(value=evaluate(f, req.word, sig))
            return S.EvalResponse(value=evaluate_open(f, req.word, req.position, sig))
        except EvalError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.post("/solve", response_model=S.SolveResponse)
    def post_solve(req: S.SolveRequest):
        sig = _sig(req.sig)
        spec = GameSpec(u=req.u, v=req.v, rounds=req.s, alternations=req.m, sig=sig)
        try:
            res = solve(spec)
        except ResourceGuard as exc:
            raise HTTPException(status_code=429, detail=str(exc))
        table = None
        if req.include_table:
            table = strategy_table(spec, res.strategy)
        return S.SolveResponse(winner=res.winner, table=table)

    @app.post("/neutral", response_model=S.NeutralResponse)
    def post_neutral(req: S.NeutralRequest):
        f = _formula(req.formula)
        sig = _sig(req.sig)
        oracle = LanguageOracle.from_formula(f, sig, tuple(req.alphabet))
        try:
            verdict = check_neutral(oracle, req.letter, req.bound)
        except EvalError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return S.NeutralResponse(
            neutral=verdict.is_neutral,
            boundChecked=verdict.neutral_up_to,
            counterexample=list(verdict.counterexample) if verdict.counterexample else None,
        )

    @app.post("/extract", response_model=S.ExtractResponse)
    def post_extract(req: S.ExtractRequest):
        sig = _sig(req.sig)
        try:
            graph = NeighborGraph.from_signature(sig)
            if req.well_typed:
                ext = well_typed_extraction(graph, sig, req.p, req.s, ceiling=req.ceiling)
            else:
                ext = find_extraction(graph, req.p, req.s, ceiling=req.ceiling)
        except (LocalityError, CeilingExceeded) as exc:
            raise HTTPException(status_code=429, detail=str(exc))
        return S.ExtractResponse(positions=list(ext.positions), well_typed=ext.well_typed)

    @app.post("/types", response_model=S.TypesResponse)
    def post_types(req: S.TypesRequest):
        sig = _sig(req.sig)
        try:
            graph = NeighborGraph.from_signature(sig)
            vecs = [type_vector(graph, sig, tuple(t), req.s) for t in req.triples]
        except (LocalityError, CeilingExceeded, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        texts = [type_to_text(v) for v in vecs]
        return S.TypesResponse(types=texts, all_equivalent=len(set(vecs)) <= 1)

    @app.post("/transform", response_model=S.TransformResponse)
    def post_transform(req: S.TransformRequest):
        from ..collapse import CollapseError, collapse_to_finite_degree
        from ..evaluator import TableEvaluator, words_upto

        f = _formula(req.formula)
        sig = _sig(req.sig)
        try:
            result = collapse_to_finite_degree(f, req.neutral, tuple(req.alphabet), sig)
        except CollapseError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        agreement = None
        if req.check_upto:
            orig = TableEvaluator(sig)
            trans = TableEvaluator(result.environment)
            agreement = all(
                orig.evaluate(f, w) == trans.evaluate(result.formula, w)
                for w in words_upto(tuple(req.alphabet), min(req.check_upto, 14))
            )
        return S.TransformResponse(
            formula=F.to_text(result.formula),
            environment=[p.name for p in result.environment],
            checked_upto=min(req.check_upto, 14) if req.check_upto else None,
            agreement=agreement,
        )

    @app.post("/suites")
    def post_suite(req: S.SuiteRequest):
        try:
            report = run_suite(req.suite, **req.params)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return JSONResponse(content={
            "suite": report.suite,
            "config": report.config,
            "summary": report.summary,
            "ok": report.ok,
            "instances": report.instances,
        })

    @app.get("/catalogue")
    def get_catalogue():
        from ..predicates import CATALOGUE

        return {"predicates": list(CATALOGUE)}

    frontend = Path(__file__).resolve().parents[3] / "frontend" / "dist"
    if frontend.is_dir():
        app.mount("/ui", StaticFiles(directory=str(frontend), html=True), name="ui")

    return app
