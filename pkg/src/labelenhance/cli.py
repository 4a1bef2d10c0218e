"""Command-line interface: enhance, degrade, eval, synth, serve.

Every enhance option can come from a flat ``key = value`` config file
(``--config``); explicit command-line flags override file values. Logs go to
stderr, results to the requested output files. Exit codes: 0 success,
2 invalid input, 3 infeasible constraints, 4 training divergence.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import DataError, InfeasibleError, TrainingDivergedError
from .model import TrainConfig
from .pipeline import ExperimentConfig, run_degrade, run_enhance, run_eval, run_synth

log = logging.getLogger("labelenhance")

EXIT_OK = 0
EXIT_INVALID_INPUT = 2
EXIT_INFEASIBLE = 3
EXIT_DIVERGED = 4


def _parse_sigma(text: str):
    if text.strip().lower() in ("auto", ""):
        return None
    value = float(text)
    if value <= 0:
        raise ValueError(f"sigma must be positive, got {value}")
    return value


# key -> (converter, default); config-file keys match the flag names
ENHANCE_OPTIONS = {
    "input": (str, None),
    "threshold": (float, None),
    "k": (int, 10),
    "sigma": (_parse_sigma, None),
    "alpha": (float, 0.1),
    "d_prime": (int, 10),
    "beta": (float, 0.1),
    "learning_rate": (float, 0.01),
    "momentum": (float, 0.9),
    "weight_decay": (float, 5e-4),
    "batch_size": (int, 32),
    "max_epochs": (int, 500),
    "converge_tol": (float, 1e-6),
    "seed": (int, 0),
    "features": (str, "reduced"),
    "targets": (str, "confidence"),
    "out_dist": (str, None),
    "out_metrics": (str, None),
    "out_augmented": (str, None),
}


def read_config_file(path: str | Path) -> dict[str, str]:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such config file: {path}")
    values: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DataError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in ENHANCE_OPTIONS:
            raise DataError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def merge_enhance_options(args: argparse.Namespace) -> dict:
    """defaults < config file < explicit command-line flags."""
    merged = {key: default for key, (_, default) in ENHANCE_OPTIONS.items()}
    if args.config is not None:
        for key, text in read_config_file(args.config).items():
            convert, _ = ENHANCE_OPTIONS[key]
            try:
                merged[key] = convert(text)
            except ValueError as exc:
                raise DataError(f"config key {key!r}: {exc}") from None
    for key in ENHANCE_OPTIONS:
        flag_value = getattr(args, key)
        if flag_value is not None:
            merged[key] = flag_value
    return merged


def build_experiment_config(merged: dict) -> ExperimentConfig:
    if merged["input"] is None:
        raise DataError("an input dataset is required (--input or config file)")
    train = TrainConfig(
        learning_rate=merged["learning_rate"],
        momentum=merged["momentum"],
        weight_decay=merged["weight_decay"],
        beta=merged["beta"],
        batch_size=merged["batch_size"],
        max_epochs=merged["max_epochs"],
        converge_tol=merged["converge_tol"],
        seed=merged["seed"],
    )
    return ExperimentConfig(
        input=merged["input"],
        threshold=merged["threshold"],
        k=merged["k"],
        sigma=merged["sigma"],
        alpha=merged["alpha"],
        d_prime=merged["d_prime"],
        train=train,
        features_variant=merged["features"],
        targets_variant=merged["targets"],
        seed=merged["seed"],
        out_dist=merged["out_dist"],
        out_metrics=merged["out_metrics"],
        out_augmented=merged["out_augmented"],
    )


def format_report_line(rep, with_intersection: bool) -> str:
    parts = [
        f"chebyshev={rep.chebyshev:.4f}",
        f"clark={rep.clark:.4f}",
        f"canberra={rep.canberra:.4f}",
        f"kl={rep.kl:.4f}",
        f"cosine={rep.cosine:.4f}",
    ]
    if with_intersection:
        parts.append(f"intersection={rep.intersection:.4f}")
    return " ".join(parts)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="labelenhance",
        description="Recover label distributions from logical labels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_enh = sub.add_parser("enhance", help="run the full enhancement pipeline")
    p_enh.add_argument("--config", help="flat key = value config file")
    p_enh.add_argument("--input", help="input dataset CSV")
    p_enh.add_argument("--threshold", type=float, help="degradation threshold (default 1/q)")
    p_enh.add_argument("--k", type=int, help="neighbor count (default 10)")
    p_enh.add_argument("--sigma", type=_parse_sigma,
                       help="graph bandwidth, or 'auto' for the k-NN heuristic")
    p_enh.add_argument("--alpha", type=float, help="projection constraint trade-off (default 0.1)")
    p_enh.add_argument("--d-prime", dest="d_prime", type=int, help="reduced dimension (default 10)")
    p_enh.add_argument("--beta", type=float, help="regression regularizer (default 0.1)")
    p_enh.add_argument("--learning-rate", dest="learning_rate", type=float)
    p_enh.add_argument("--momentum", type=float)
    p_enh.add_argument("--weight-decay", dest="weight_decay", type=float)
    p_enh.add_argument("--batch-size", dest="batch_size", type=int)
    p_enh.add_argument("--max-epochs", dest="max_epochs", type=int)
    p_enh.add_argument("--converge-tol", dest="converge_tol", type=float)
    p_enh.add_argument("--seed", type=int)
    p_enh.add_argument("--features", choices=("raw", "reduced"),
                       help="use raw standardized features or the reduced ones")
    p_enh.add_argument("--targets", choices=("logical", "confidence"),
                       help="train on normalized logical labels or solved confidences")
    p_enh.add_argument("--out-dist", dest="out_dist", help="recovered distribution CSV")
    p_enh.add_argument("--out-metrics", dest="out_metrics", help="metric report JSON")
    p_enh.add_argument("--out-augmented", dest="out_augmented",
                       help="augmented dataset CSV (reduced features + targets)")
    p_enh.add_argument("--intersection", action="store_true",
                       help="include intersection in the printed summary")

    p_deg = sub.add_parser("degrade", help="threshold a distribution dataset into logical labels")
    p_deg.add_argument("--input", required=True)
    p_deg.add_argument("--threshold", type=float, required=True)
    p_deg.add_argument("--output", required=True)

    p_eval = sub.add_parser("eval", help="compare a recovered distribution against ground truth")
    p_eval.add_argument("--pred", required=True)
    p_eval.add_argument("--truth", required=True)
    p_eval.add_argument("--output", help="metric report JSON")
    p_eval.add_argument("--intersection", action="store_true")

    p_syn = sub.add_parser("synth", help="generate a synthetic ground-truth dataset")
    p_syn.add_argument("--n", type=int, required=True)
    p_syn.add_argument("--d", type=int, required=True)
    p_syn.add_argument("--q", type=int, required=True)
    p_syn.add_argument("--noise", type=float, default=0.0)
    p_syn.add_argument("--seed", type=int, default=0)
    p_syn.add_argument("--output", required=True)

    p_srv = sub.add_parser("serve", help="start the HTTP service")
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--port", type=int, default=8000)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    args = make_parser().parse_args(argv)
    try:
        if args.command == "enhance":
            cfg = build_experiment_config(merge_enhance_options(args))
            result = run_enhance(cfg)
            if result.report is not None:
                log.info("recovery quality: %s",
                         format_report_line(result.report, args.intersection))
        elif args.command == "degrade":
            run_degrade(args.input, args.threshold, args.output)
        elif args.command == "eval":
            rep = run_eval(args.pred, args.truth, args.output)
            print(format_report_line(rep, args.intersection))
        elif args.command == "synth":
            run_synth(args.n, args.d, args.q, args.noise, args.seed, args.output)
        elif args.command == "serve":
            import uvicorn

            from .service.app import app

            uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    except DataError as exc:
        log.error("%s", exc)
        return EXIT_INVALID_INPUT
    except InfeasibleError as exc:
        log.error("%s", exc)
        return EXIT_INFEASIBLE
    except TrainingDivergedError as exc:
        log.error("%s", exc)
        return EXIT_DIVERGED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
