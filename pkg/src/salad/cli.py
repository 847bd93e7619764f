"""Command-line entry point: run, eval, synth, gradcheck, serve."""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import ExitStack
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import io as sio
from . import model as mc
from .errors import ConfigError, ParseError, SaladError
from .evaluation import EvalConfig, score
from .pipeline import Mode, PipelineConfig, SaladPipeline, TimingStats
from .synth import PATTERNS, generate, parse_injections

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_PARSE = 3
EXIT_RUNTIME = 4
EXIT_IO = 5

GRADCHECK_TOLERANCE = 1e-4
REPORT_FIELDS = ("tp", "fp", "fn", "precision", "recall", "fscore", "timing_mean", "timing_std", "point_fp")


def _open_out(stack: ExitStack, path):
    if path in (None, "-"):
        return sys.stdout
    return stack.enter_context(open(path, "w", newline=""))


def cmd_run(args) -> int:
    config = PipelineConfig(b=args.b, seed=args.seed, mode=Mode(args.mode), timing=not args.no_timing)
    pipe = SaladPipeline(config)
    decided = anomalies = 0
    with ExitStack() as stack:
        src = sys.stdin if args.input == "-" else stack.enter_context(open(args.input, newline=""))
        out = _open_out(stack, args.alerts)
        for point in sio.iter_points(src):
            alert = pipe.push(point)
            if alert is None:
                continue
            decided += 1
            anomalies += alert.is_anomaly
            sio.write_alert(out, alert)
        out.flush()
    if args.trace:
        sio.write_trace(args.trace, pipe.trace)
    print(f"points={pipe.next_t} decided={decided} anomalies={anomalies} first_decision_t={pipe.first_decision_t}",
          file=sys.stderr)
    return EXIT_OK


def format_report(report) -> str:
    timing = report.timing or TimingStats()
    row = {
        "tp": report.tp, "fp": report.fp, "fn": report.fn,
        "precision": f"{report.precision:.4f}", "recall": f"{report.recall:.4f}",
        "fscore": f"{report.fscore:.4f}",
        "timing_mean": f"{timing.mean:.6f}", "timing_std": f"{timing.std:.6f}",
        "point_fp": report.point_fp,
    }
    return "\n".join(f"{k}: {row[k]}" for k in REPORT_FIELDS)


def cmd_eval(args) -> int:
    config = EvalConfig(slack=args.slack)
    alerts = sio.read_alerts(args.alerts)
    labels = sio.read_labels(args.labels)
    timing = TimingStats.from_samples([a.decision_time for a in alerts])
    report = score(alerts, labels, config, timing=timing)
    if args.json:
        doc = {k: getattr(report, k) for k in ("tp", "fp", "fn", "precision", "recall", "fscore", "point_fp")}
        doc.update(timing_mean=timing.mean, timing_std=timing.std, detected=report.detected)
        print(json.dumps(doc))
    else:
        print(format_report(report))
    return EXIT_OK


def cmd_synth(args) -> int:
    injections = parse_injections(args.anomalies)
    values, windows = generate(
        pattern=args.pattern, period=args.period, length=args.length, noise=args.noise,
        seed=args.seed, amplitude=args.amplitude, offset=args.offset, injections=injections,
    )
    labels_path = args.labels or str(Path(args.out).with_suffix(".labels.json"))
    sio.write_points(args.out, values)
    sio.write_labels(labels_path, windows)
    print(f"wrote {len(values)} points to {args.out} and {len(windows)} windows to {labels_path}", file=sys.stderr)
    return EXIT_OK


def gradcheck(seed: int = 0, hidden: int = 10, window: int = 10, step: float = 1e-5,
              corrupt: bool = False, warmup_epochs: int = 20) -> float:
    """Max relative discrepancy between BPTT and finite-difference gradients."""
    if window < 2:
        raise ConfigError(f"window must be >= 2, got {window}")
    config = mc.NetworkConfig(hidden_units=hidden, seed=seed)
    samples = np.sin(2 * np.pi * np.arange(window) / 7.0) + 2.0
    # a few epochs bring the loss down, which keeps finite-difference
    # cancellation well below the tolerance on small entries
    model = mc.train(samples, replace(config, epoch_cap=warmup_epochs)).model
    _, analytic = mc.loss_and_grad(model, samples)
    if corrupt:
        analytic = dict(analytic, w_rec=analytic["w_rec"] * 1.01)
    numeric = mc.numeric_gradient(model, samples, step=step)
    return mc.gradient_discrepancy(analytic, numeric)


def cmd_gradcheck(args) -> int:
    worst = gradcheck(args.seed, args.hidden, args.window, args.step, args.corrupt_gradient)
    ok = worst < GRADCHECK_TOLERANCE
    print(f"max relative discrepancy: {worst:.3e} ({'pass' if ok else 'FAIL'}, tolerance {GRADCHECK_TOLERANCE:g})")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("salad.service.app:app", host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(prog="salad", description="Streaming LSTM anomaly detection for recurrent series.",
                                     formatter_class=fmt)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="detect anomalies in a point file", formatter_class=fmt)
    p.add_argument("input", help="CSV with a timestamp,value header ('-' for stdin)")
    p.add_argument("--b", type=int, required=True, help="conversion window length (e.g. 42 hourly, 288 half-hourly)")
    p.add_argument("--seed", type=int, default=0, help="base seed for every model training")
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.SALAD.value,
                   help="salad: two-stage detector; repad: short-window baseline on raw values")
    p.add_argument("--alerts", default="-", help="alert JSON-lines output ('-' for stdout)")
    p.add_argument("--trace", default=None, help="optional per-point trace CSV")
    p.add_argument("--no-timing", action="store_true", help="write null decision times (reproducible output)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("eval", help="score an alert file against labels", formatter_class=fmt)
    p.add_argument("alerts", help="alert JSON-lines file written by run")
    p.add_argument("labels", help="label JSON file with a windows list")
    p.add_argument("--slack", type=int, default=3, help="points added on each side of a label window")
    p.add_argument("--json", action="store_true", help="print one JSON object instead of key: value lines")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("synth", help="write a synthetic series and its label file", formatter_class=fmt)
    p.add_argument("out", help="point CSV to write")
    p.add_argument("--pattern", choices=PATTERNS, default="sine", help="base shape")
    p.add_argument("--period", type=int, default=50, help="points per fast cycle")
    p.add_argument("--length", type=int, default=3000, help="number of points")
    p.add_argument("--anomalies", default="", help="comma list of kind:index:magnitude[:length], kind in spike|dip|shift")
    p.add_argument("--noise", type=float, default=0.01, help="Gaussian std as a fraction of amplitude")
    p.add_argument("--seed", type=int, default=0, help="noise seed")
    p.add_argument("--amplitude", type=float, default=1.0, help="fast-cycle amplitude")
    p.add_argument("--offset", type=float, default=3.0, help="level added so values stay away from zero")
    p.add_argument("--labels", default=None, help="label output (default: OUT with .labels.json)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("gradcheck", help="compare BPTT gradients with finite differences", formatter_class=fmt)
    p.add_argument("--seed", type=int, default=0, help="weight-init seed")
    p.add_argument("--hidden", type=int, default=10, help="hidden units")
    p.add_argument("--window", type=int, default=10, help="sine samples in the check window")
    p.add_argument("--step", type=float, default=1e-5, help="central-difference step")
    p.add_argument("--corrupt-gradient", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_gradcheck)

    p = sub.add_parser("serve", help="run the HTTP service", formatter_class=fmt)
    p.add_argument("--host", default="127.0.0.1", help="bind address")
    p.add_argument("--port", type=int, default=8000, help="bind port")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SaladError, ArithmeticError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
