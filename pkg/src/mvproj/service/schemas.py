"""Request and response models of the HTTP service.

Rationals travel as strings "p/q"; functions and pairs use the same JSON
shapes as the on-disk files (see mvproj.wire).
"""
from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class OrbitRequest(BaseModel):
    m: int
    p: int


class OrbitResponse(BaseModel):
    orbit: list[str]
    k: Optional[int]
    multipliers: list[int]
    cyclic: bool
    line: str


class EtaRequest(BaseModel):
    m: int
    p: int
    compile: bool = False


class EtaResponse(BaseModel):
    multipliers: list[int]
    descent_term: str
    unit_zero_term: str
    point_zero_term: str
    compiled: Optional[dict[str, Any]] = None


class FnEvalRequest(BaseModel):
    function: Any
    at: list[str]


class FnEvalResponse(BaseModel):
    value: str


class FnRequest(BaseModel):
    function: Any


class ValidateResponse(BaseModel):
    valid: bool
    violations: list[str]


class ArchimedeanResponse(BaseModel):
    archimedean: bool
    min_value: str
    identically_zero: bool


class PairRequest(BaseModel):
    f: Any
    g: Any


class ExtremalsResponse(BaseModel):
    extremals: list[list[str]]
    range_cells: list[dict]


class IsoRequest(BaseModel):
    f: Any
    g: Any
    f1: Any
    g1: Any


class IsoResponse(BaseModel):
    ranges_equal: bool
    conclusion: str


class SubstitutionRequest(BaseModel):
    pair: dict


class EqualizerResponse(BaseModel):
    cells: list[dict]
    connected: bool
    contains_origin: bool


class ProjectivityResponse(BaseModel):
    projective: bool
    witness: Optional[list[str]]
    equalizer: list[dict]
    connected: bool
    contains_origin: bool


class OracleRequest(BaseModel):
    pair: dict
    denominator: int = Field(ge=1)


class OracleResponse(BaseModel):
    refuted: bool
    checked: int
    counterexamples: list[list[str]]


class BridgeRequest(BaseModel):
    pair: dict
    prime_bound: int = Field(ge=2, le=13)


class BridgeResponse(BaseModel):
    holds: bool
    points_checked: int
    violations: list[dict]


class CaseIRequest(BaseModel):
    f1: Any
    f2: Any
    g1: Any
    g2: Any


class CaseIIRequest(BaseModel):
    a: int
    b: int
    c: int
    d: int


class CaseIIIRequest(BaseModel):
    triangles: list[dict]


class BuildResponse(BaseModel):
    pair: dict
    projective: bool
    equalizer: list[dict]
    constants: Optional[dict[str, Any]] = None
    parameters: Optional[list[dict]] = None


class TermParseRequest(BaseModel):
    source: str
    arity: int = Field(default=2, ge=1, le=2)
    compile: bool = False


class TermParseResponse(BaseModel):
    printed: str
    arity: int
    compiled: Optional[Any] = None


class FnPlotRequest(BaseModel):
    functions: list[dict]  # {"function": ..., "label": str}


class PairPlotRequest(BaseModel):
    pair: dict
