from typing import List, Literal, Optional

from pydantic import BaseModel, Field


class SessionCreate(BaseModel):
    b: int = Field(..., ge=4, description="conversion window length")
    seed: int = 0
    mode: Literal["salad", "repad"] = "salad"
    timing: bool = True


class SessionInfo(BaseModel):
    session_id: str
    b: int
    seed: int
    mode: str
    first_decision_t: int


class PointIn(BaseModel):
    value: float
    timestamp: Optional[str] = None


class PointsIn(BaseModel):
    points: List[PointIn] = Field(..., min_length=1)


class AlertOut(BaseModel):
    t: int
    timestamp: Optional[str] = None
    value: float
    verdict: Literal["Normal", "PatternChange", "Anomaly"]
    aare_first: float
    aare_recheck: Optional[float] = None
    threshold: float
    decision_time_seconds: Optional[float] = None


class PushResult(BaseModel):
    accepted: int
    next_t: int
    alerts: List[AlertOut]


class TimingOut(BaseModel):
    mean: float
    std: float
    count: int


class SessionSummary(SessionInfo):
    points: int
    decided: int
    anomalies: int
    timing: TimingOut


class WindowIn(BaseModel):
    s: int = Field(..., ge=0)
    e: int = Field(..., ge=0)
    note: Optional[str] = None


class EvaluateRequest(BaseModel):
    alerts: List[AlertOut]
    labels: List[WindowIn]
    slack: int = Field(3, ge=0)


class EvaluateResponse(BaseModel):
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    fscore: float
    point_fp: int
    timing: TimingOut
    detected: List[int]


class SynthRequest(BaseModel):
    pattern: Literal["sine", "double-sine", "constant"] = "sine"
    period: int = 50
    length: int = 3000
    anomalies: str = ""
    noise: float = 0.01
    seed: int = 0
    amplitude: float = 1.0
    offset: float = 3.0


class SynthResponse(BaseModel):
    values: List[float]
    windows: List[WindowIn]


class Health(BaseModel):
    status: str = "ok"
    sessions: int
