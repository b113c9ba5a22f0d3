"""Request/response models for the service surface.

Exact series travel in the wire format
{"exp_denom": d, "trunc": T, "terms": [[n, "p/q"], ...]} with the term
exponents strictly increasing; values are rational strings, never floats.
High-precision numbers are carried as decimal strings for the same
reason: exactness and diffability win over JSON number convenience.
"""

from __future__ import annotations

from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, field_validator

from ..series import QSeries, qs_from_json_obj, qs_to_json_obj


class SeriesModel(BaseModel):
    exp_denom: int = Field(ge=1)
    trunc: int
    terms: List[Tuple[int, str]]

    @classmethod
    def from_qseries(cls, s: QSeries) -> "SeriesModel":
        return cls(**qs_to_json_obj(s))

    def to_qseries(self) -> QSeries:
        return qs_from_json_obj(self.model_dump())


class CheckModel(BaseModel):
    name: str
    status: Literal["pass", "fail", "error"]
    detail: str = ""


def check_from_flag(name: str, passed: bool, detail: str = "") -> CheckModel:
    return CheckModel(name=name, status="pass" if passed else "fail", detail=detail)


class _EvenM(BaseModel):
    m: int = Field(ge=2)

    @field_validator("m")
    @classmethod
    def _even(cls, v: int) -> int:
        if v % 2:
            raise ValueError("m must be even")
        return v


class DcoeffsRequest(_EvenM):
    order: int = Field(ge=1, le=2000)


class DcoeffsResponse(BaseModel):
    m: int
    order: int
    coefficients: Dict[str, SeriesModel]  # keys D0, D2, ..., Dm


class ChiRequest(_EvenM):
    r: int
    order: int = Field(ge=1, le=2000)


class ChiResponse(BaseModel):
    m: int
    r: int
    order: int
    series: SeriesModel


class CharacterRequest(_EvenM):
    r: int
    order: int = Field(ge=1, le=4000)
    kind: Literal["chf", "trace"] = "chf"


class CharacterResponse(BaseModel):
    m: int
    r: int
    order: int
    kind: Literal["chf", "trace"]
    series: SeriesModel


class OracleVerifyRequest(_EvenM):
    rmax: int = Field(ge=0, le=20)
    order: int = Field(ge=1, le=200)


class OracleVerifyResponse(BaseModel):
    m: int
    rmax: int
    order: int
    passed: bool
    checks: List[CheckModel]


class ThetaIdentitiesRequest(BaseModel):
    order: int = Field(ge=8, le=2000)


class ThetaIdentitiesResponse(BaseModel):
    order: int
    passed: bool
    checks: List[CheckModel]


class EulerEntry(BaseModel):
    k: int
    m: int
    exact: str           # pi-polynomial string, e.g. "1/8 - 1/pi^2"
    value: str           # decimal rendering
    oracle_delta: Optional[str] = None


class EulerRequest(BaseModel):
    kmax: int = Field(ge=0, le=40)
    mmax: int = Field(ge=1, le=20)
    prec: int = Field(default=30, ge=15, le=200)
    oracle: bool = True


class EulerResponse(BaseModel):
    kmax: int
    mmax: int
    passed: bool
    entries: List[EulerEntry]


class AsymptRequest(_EvenM):
    r: int
    t: str               # rational or decimal string, e.g. "1/10" or "0.05"
    N: int = Field(ge=0, le=30)
    prec: int = Field(default=50, ge=15, le=200)


class AsymptResponse(BaseModel):
    m: int
    r: int
    t: str
    N: int
    prec: int
    asymptotic: str
    direct: str
    prefactor: str
    defect: str


class TransformCheckRequest(_EvenM):
    m: int = Field(default=2, ge=2)
    gamma: Optional[Tuple[int, int, int, int]] = None
    tau: Optional[Tuple[float, float]] = None
    z: Optional[Tuple[float, float]] = None
    prec: int = Field(default=50, ge=15, le=200)
    seed: int = 0


class TransformCheckResponse(BaseModel):
    m: int
    prec: int
    passed: bool
    checks: List[CheckModel]


class CriterionModel(BaseModel):
    id: int
    title: str
    passed: bool
    elapsed: float
    checks: List[CheckModel]


class VerifyAllRequest(BaseModel):
    fast: bool = False
    seed: int = 0


class VerifyAllResponse(BaseModel):
    passed: bool
    fast: bool
    seed: int
    elapsed: float
    criteria: List[CriterionModel]
