"""Request/response models for the service endpoints."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field


class EnumerateTablesRequest(BaseModel):
    max_dim: int = Field(ge=0)
    max_len: int = Field(ge=1)
    trees: bool = False


class EnumerateTablesResponse(BaseModel):
    tables: list[str]
    trees: list[str] | None = None


class HomRequest(BaseModel):
    src: str
    dst: str


class HomResponse(BaseModel):
    count: int
    morphisms: list[list[list[int]]]


class RealizeRequest(BaseModel):
    table: str
    trunc: int | None = None


class RealizeResponse(BaseModel):
    trunc: int
    cells: list[list[str]]
    src: list[list[int]]
    tgt: list[list[int]]


class BuildCoheratorRequest(BaseModel):
    flavor: Literal["groupoid", "category"] = "groupoid"
    strategy: Literal["canonical", "bl", "reduced"] = "canonical"
    max_dim: int = Field(default=1, ge=0)
    max_size: int = Field(default=6, ge=1)
    max_len: int = Field(default=2, ge=1)
    levels: int = Field(default=1, ge=0)


class BuildCoheratorResponse(BaseModel):
    tower: dict
    level_sizes: list[int]


class DeriveRequest(BaseModel):
    op: str
    tower: dict | None = None
    print_boundary: bool = True


class DeriveResponse(BaseModel):
    op: str
    term: str
    boundary: dict | None = None
    symbols: dict[str, dict]


class EvalRequest(BaseModel):
    model: dict
    term: str
    args: list[int]


class EvalResponse(BaseModel):
    dim: int
    cell: int
    label: str


class PiRequest(BaseModel):
    model: dict
    i: int = Field(ge=0)
    base: int = 0


class PiResponse(BaseModel):
    i: int
    base: int
    order: int
    names: list[str]
    table: list[list[int]]
    unit: int


class WeqRequest(BaseModel):
    src_model: dict
    dst_model: dict
    mapping: list[list[int]]


class WeqResponse(BaseModel):
    weak_equivalence: bool
    valid_morphism: bool
    bound: int
    reasons: list[str]


class CheckFibrantRequest(BaseModel):
    tower: dict
    max_dim: int | None = None
    max_size: int | None = None
    max_len: int | None = None
    pair_level: int | None = None


class CheckFibrantResponse(BaseModel):
    cellular: bool
    fibrant: bool
    coherator_within_bounds: bool
    pair_level: int
    pairs_checked: int
    failures: list[dict]
    summary: str


class RelayerRequest(BaseModel):
    presentation: dict


class RelayerResponse(BaseModel):
    presentation: dict
    layer_sizes: list[int]


class LiftRequest(BaseModel):
    tower: dict
    model: dict


class LiftResponse(BaseModel):
    assignment: dict[str, str]


class ErrorResponse(BaseModel):
    error: str
    kind: str
