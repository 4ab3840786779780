"""Request/response models for the game service."""

from __future__ import annotations

from typing import List, Optional

from pydantic import BaseModel, Field


class CreateGameRequest(BaseModel):
    u: str
    v: str
    s: int = Field(ge=1)
    m: Optional[int] = Field(default=None, ge=0)  # null = unbounded switches
    sig: str = "less"
    humanRole: str = Field(default="spoiler", pattern="^(spoiler|duplicator)$")


class Pebbles(BaseModel):
    previous: Optional[List[int]] = None
    current: Optional[List[int]] = None


class Words(BaseModel):
    u: str
    v: str


class GameStateModel(BaseModel):
    words: Words
    pebbles: Pebbles
    roundsUsed: int
    alternationsUsed: int
    turn: str
    winner: Optional[str] = None
    reason: Optional[str] = None
    pending: Optional[dict] = None  # spoiler's placed move awaiting a reply
    humanRole: str
    rounds: int
    alternations: Optional[int] = None
    allowedU: Optional[List[int]] = None  # legal positions this round
    allowedV: Optional[List[int]] = None


class CreateGameResponse(BaseModel):
    id: str
    state: GameStateModel


class StateResponse(BaseModel):
    state: GameStateModel


class MoveRequest(BaseModel):
    side: str = Field(pattern="^(u|v)$")
    position: int = Field(ge=0)


class Verdict(BaseModel):
    winner: str
    reason: Optional[str] = None


class MoveResponse(BaseModel):
    state: GameStateModel
    verdict: Optional[Verdict] = None


class HintResponse(BaseModel):
    side: str
    position: int
    winning: bool


class EvalRequest(BaseModel):
    formula: str
    word: str
    sig: str = "less"
    position: Optional[int] = None  # evaluate with one free variable bound


class EvalResponse(BaseModel):
    value: bool


class SolveRequest(BaseModel):
    u: str
    v: str
    s: int = Field(ge=1)
    m: Optional[int] = None
    sig: str = "less"
    include_table: bool = False


class SolveResponse(BaseModel):
    winner: str
    table: Optional[List[str]] = None


class NeutralRequest(BaseModel):
    formula: str
    sig: str = "less"
    alphabet: str
    letter: str
    bound: int = 6


class NeutralResponse(BaseModel):
    neutral: bool
    boundChecked: Optional[int] = None
    counterexample: Optional[List[str]] = None


class ExtractRequest(BaseModel):
    sig: str
    p: int = Field(ge=1)
    s: int = Field(ge=0)
    well_typed: bool = False
    ceiling: int = 10**6


class ExtractResponse(BaseModel):
    positions: List[int]
    well_typed: bool


class TypesRequest(BaseModel):
    sig: str
    s: int = Field(ge=0)
    triples: List[List[int]]
    level: Optional[int] = None  # defaults to s


class TypesResponse(BaseModel):
    types: List[str]  # canonical text per triple
    all_equivalent: bool


class TransformRequest(BaseModel):
    formula: str
    sig: str = "less"
    alphabet: str = "ac"
    neutral: str = "c"
    check_upto: int = 0  # when > 0, verify agreement on all words up to here


class TransformResponse(BaseModel):
    formula: str
    environment: List[str]
    checked_upto: Optional[int] = None
    agreement: Optional[bool] = None


class SuiteRequest(BaseModel):
    suite: str
    params: dict = Field(default_factory=dict)
