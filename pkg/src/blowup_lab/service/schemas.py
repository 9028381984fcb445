"""Request models for the service.

Graphs travel as strings (edge-list text or graph6, auto-detected), weight
files as their raw JSON text, and rationals as "p/q" strings, so the wire
format matches the on-disk formats byte for byte and the server is the
single place where parsing and validation happen.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class BlowupRequest(BaseModel):
    graph: str
    k: list[int]


class ReduceRequest(BaseModel):
    graph: str


class AutRequest(BaseModel):
    graph: str


class DensityRequest(BaseModel):
    pattern: str
    target: str
    mode: Literal["strong", "induced"] = "strong"
    weights: Optional[str] = None


class D1Request(BaseModel):
    graph1: str
    graph2: str
    weights1: Optional[str] = None
    weights2: Optional[str] = None
    grid: int = 12


class RegularRequest(BaseModel):
    graph: str
    reference: str
    vertex: int
    weights: Optional[str] = None
    epsilon: Optional[str] = None


class OptimizeRequest(BaseModel):
    core: str
    k: list[int]
    h: int
    restarts: int = 32
    tol: float = 1e-9
    seed: int = 0
    force_search: bool = False


class BalancedRequest(BaseModel):
    graph: str


class DichotomyRequest(BaseModel):
    core: str
    k: list[int]
    n: int
    gamma: str
    psi: Optional[list[int]] = None
    psi_seed: Optional[int] = None


class CheckBoundRequest(BaseModel):
    kind: Literal["biclique", "star"]
    graph: str
    r: int
    ell: Optional[int] = None
    s: Optional[int] = None
    samples: int = 100_000
    seed: int = 0
    weights: Optional[str] = None


class ScanRequest(BaseModel):
    core: str
    k: list[int]
    h: int
    n: int
    mode: Literal["strong", "induced"] = "strong"
    jobs: int = Field(default=1, ge=1)
    checkpoint: Optional[str] = None


class EvidenceRequest(BaseModel):
    core: str
    k: list[int]
    h: int
    n_range: list[int]


class ClosenessRequest(BaseModel):
    core: str
    k: list[int]
    h: int
    graph: str
    weights: Optional[str] = None


class SelftestRequest(BaseModel):
    pass
