"""Streaming anomaly detection for recurrent series with self-retraining LSTMs."""

from .conversion import CalibratedAare, Converter, RawPoint
from .detection import DetectionVerdict, Detector, VerdictKind
from .evaluation import EvalConfig, EvalReport, LabelWindow, fscore, score
from .model import MinMaxScaler, NetworkConfig, SequenceModel, TrainOutcome, init_model, predict_next, train
from .pipeline import (
    AnomalyAlert, Mode, PipelineConfig, SaladPipeline, TimingStats, run, run_repad_baseline, run_salad, stream,
)

__version__ = "0.1.0"

__all__ = [
    "AnomalyAlert", "CalibratedAare", "Converter", "DetectionVerdict", "Detector", "EvalConfig", "EvalReport",
    "LabelWindow", "MinMaxScaler", "Mode", "NetworkConfig", "PipelineConfig", "RawPoint", "SaladPipeline",
    "SequenceModel", "TimingStats", "TrainOutcome", "VerdictKind", "fscore", "init_model", "predict_next",
    "run", "run_repad_baseline", "run_salad", "score", "stream", "train",
]
