"""FastAPI app. Each session owns one pipeline; pushes to a session are serialized."""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from typing import Dict, List

from fastapi import FastAPI, HTTPException

from ..conversion import RawPoint
from ..errors import SaladError
from ..evaluation import EvalConfig, LabelWindow, score
from ..io import alert_from_record, alert_record
from ..pipeline import Mode, PipelineConfig, SaladPipeline, TimingStats
from ..synth import generate, parse_injections
from . import schemas as sc

app = FastAPI(title="salad", version="0.1.0")


@dataclass
class _Session:
    pipe: SaladPipeline
    lock: threading.Lock = field(default_factory=threading.Lock)
    decided: int = 0
    anomalies: int = 0
    times: List[float] = field(default_factory=list)


_sessions: Dict[str, _Session] = {}
_registry_lock = threading.Lock()


def _timing(stats: TimingStats) -> sc.TimingOut:
    return sc.TimingOut(mean=stats.mean, std=stats.std, count=stats.count)


def _get(session_id: str) -> _Session:
    with _registry_lock:
        sess = _sessions.get(session_id)
    if sess is None:
        raise HTTPException(status_code=404, detail=f"no session {session_id}")
    return sess


def _info(session_id: str, sess: _Session) -> dict:
    cfg = sess.pipe.config
    return dict(session_id=session_id, b=cfg.b, seed=cfg.seed, mode=cfg.mode.value,
                first_decision_t=sess.pipe.first_decision_t)


@app.get("/health", response_model=sc.Health)
def health():
    return sc.Health(sessions=len(_sessions))


@app.post("/sessions", response_model=sc.SessionInfo, status_code=201)
def create_session(req: sc.SessionCreate):
    try:
        config = PipelineConfig(b=req.b, seed=req.seed, mode=Mode(req.mode), timing=req.timing)
    except SaladError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    session_id = uuid.uuid4().hex
    sess = _Session(SaladPipeline(config))
    with _registry_lock:
        _sessions[session_id] = sess
    return sc.SessionInfo(**_info(session_id, sess))


@app.post("/sessions/{session_id}/points", response_model=sc.PushResult)
def push_points(session_id: str, body: sc.PointsIn):
    sess = _get(session_id)
    out = []
    with sess.lock:
        for p in body.points:
            try:
                alert = sess.pipe.push(RawPoint(sess.pipe.next_t, p.value, p.timestamp))
            except SaladError as exc:
                raise HTTPException(status_code=422, detail=str(exc))
            if alert is None:
                continue
            sess.decided += 1
            sess.anomalies += alert.is_anomaly
            if alert.decision_time is not None:
                sess.times.append(alert.decision_time)
            out.append(sc.AlertOut(**alert_record(alert)))
        return sc.PushResult(accepted=len(body.points), next_t=sess.pipe.next_t, alerts=out)


@app.get("/sessions/{session_id}", response_model=sc.SessionSummary)
def session_summary(session_id: str):
    sess = _get(session_id)
    with sess.lock:
        return sc.SessionSummary(
            **_info(session_id, sess), points=sess.pipe.next_t, decided=sess.decided,
            anomalies=sess.anomalies, timing=_timing(TimingStats.from_samples(sess.times)),
        )


@app.delete("/sessions/{session_id}", status_code=204)
def delete_session(session_id: str):
    with _registry_lock:
        if _sessions.pop(session_id, None) is None:
            raise HTTPException(status_code=404, detail=f"no session {session_id}")


@app.post("/evaluate", response_model=sc.EvaluateResponse)
def evaluate(req: sc.EvaluateRequest):
    try:
        alerts = [alert_from_record(a.model_dump()) for a in req.alerts]
        labels = [LabelWindow(w.s, w.e, w.note) for w in req.labels]
        timing = TimingStats.from_samples([a.decision_time for a in alerts])
        report = score(alerts, labels, EvalConfig(req.slack), timing=timing)
    except SaladError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return sc.EvaluateResponse(
        tp=report.tp, fp=report.fp, fn=report.fn, precision=report.precision, recall=report.recall,
        fscore=report.fscore, point_fp=report.point_fp, timing=_timing(timing), detected=report.detected,
    )


@app.post("/synth", response_model=sc.SynthResponse)
def synth(req: sc.SynthRequest):
    try:
        values, windows = generate(
            pattern=req.pattern, period=req.period, length=req.length, noise=req.noise, seed=req.seed,
            amplitude=req.amplitude, offset=req.offset, injections=parse_injections(req.anomalies),
        )
    except SaladError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return sc.SynthResponse(values=[float(v) for v in values],
                            windows=[sc.WindowIn(s=w.s, e=w.e, note=w.note) for w in windows])
