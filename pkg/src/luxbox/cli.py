"""Command-line workflow driver: generate, label, train, validate, explain, serve.

Exit codes: 0 success, 2 validation error (bad arguments, malformed inputs,
out-of-range data), 3 I/O error.  Every artifact is written through the
digest-stable text formats in :mod:`luxbox.datasets` and :mod:`luxbox.ann`,
so a fixed seed reproduces byte-identical files end to end.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import ann
from .ann import EvalReport, TrainConfig, load_model, save_model, split, train, validate
from .datasets import (
    LabelIngestError,
    label_dataset,
    read_configs,
    read_labeled_dataset,
    write_configs,
    write_labeled_dataset,
)
from .daylight import METRIC_NAMES, ProxyOracle
from .scene import (
    DEFAULT_GRID_SPACING,
    DEFAULT_WALL_OFFSET,
    DEFAULT_WORKPLANE,
    DesignSpace,
    DesignSpaceError,
    NormalizationBounds,
    RoomConfig,
    encode_many,
    enumerate_design_space,
    resolve_space,
)
from .service import serve
from .shapley import FeatureGrouping, sample_background, shap_summary

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3


def file_digest(path: str | Path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class RunManifest:
    """Everything needed to reproduce an end-to-end run bit for bit."""

    seed: int = 0
    train_space: str = "table1"
    validation_space: str = "table4"
    oracle_mode: str = "proxy"
    oracle_source: str | None = None
    grid_spacing: float = DEFAULT_GRID_SPACING
    workplane: float = DEFAULT_WORKPLANE
    wall_offset: float = DEFAULT_WALL_OFFSET
    train_config: TrainConfig = field(default_factory=TrainConfig)
    out_dir: str = "artifacts"


def run_pipeline(manifest: RunManifest) -> dict:
    """Generate -> label -> train -> label validation -> validate; returns paths + digests."""
    out = Path(manifest.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    space = resolve_space(manifest.train_space)
    configs = enumerate_design_space(space)
    configs_path = out / "configs.csv"
    write_configs(configs, configs_path, space)

    oracle = ProxyOracle(
        seed=manifest.seed,
        grid_spacing=manifest.grid_spacing,
        workplane=manifest.workplane,
        wall_offset=manifest.wall_offset,
    )
    dataset = label_dataset(configs, manifest.oracle_mode, manifest.oracle_source, oracle)
    dataset.meta["design_space"] = space.to_dict()
    bounds = NormalizationBounds.from_space(space)
    dataset.meta["normalization_bounds"] = bounds.to_dict()
    labels_path = out / "labels.csv"
    write_labeled_dataset(dataset, labels_path)

    cfg = manifest.train_config
    train_part, test_part = split(dataset, cfg.train_fraction, cfg.seed)
    net, history = train(train_part, cfg, bounds)
    model_path = out / "model.json"
    save_model(net, model_path, cfg)
    holdout = validate(net, test_part)

    vspace = resolve_space(manifest.validation_space)
    vconfigs = enumerate_design_space(vspace)
    vdataset = label_dataset(vconfigs, "proxy", None, oracle)
    vdataset.meta["design_space"] = vspace.to_dict()
    vdataset.meta["normalization_bounds"] = bounds.to_dict()
    vlabels_path = out / "validation_labels.csv"
    write_labeled_dataset(vdataset, vlabels_path)

    report = validate(net, vdataset)
    report_path = out / "report.csv"
    report.write_csv(report_path)

    return {
        "paths": {
            "configs": configs_path,
            "labels": labels_path,
            "model": model_path,
            "validation_labels": vlabels_path,
            "report": report_path,
        },
        "digests": {
            "labels": file_digest(labels_path),
            "model": file_digest(model_path),
            "report": file_digest(report_path),
        },
        "holdout": holdout,
        "report": report,
        "history": history,
        "net": net,
        "validation_dataset": vdataset,
        "train_dataset": train_part,
        "bounds": bounds,
    }


def _print_report(report: EvalReport) -> None:
    print(f"{'metric':<12}{'mae':>10}{'mse':>10}{'benchmark_mae':>15}")
    for row in report.rows():
        print(
            f"{row['metric']:<12}{row['mae']:>10.4f}{row['mse']:>10.5f}{row['benchmark_mae']:>15.4f}"
        )
    print(f"mean mae: {float(np.mean(report.mae)):.4f} over n={report.n}")


def _space_from_args(args) -> DesignSpace:
    return resolve_space(args.space if args.space else args.preset)


def _oracle_from_args(args) -> ProxyOracle:
    return ProxyOracle(seed=args.seed, grid_spacing=args.grid_spacing)


def cmd_generate(args) -> int:
    space = _space_from_args(args)
    configs = enumerate_design_space(space)
    write_configs(configs, args.out, space)
    print(f"wrote {len(configs)} configs to {args.out}")
    return EXIT_OK


def cmd_label(args) -> int:
    configs, meta = read_configs(args.configs)
    oracle = _oracle_from_args(args)
    dataset = label_dataset(configs, args.oracle, args.source, oracle)
    if "design_space" in meta:
        dataset.meta["design_space"] = meta["design_space"]
        bounds = NormalizationBounds.from_space(DesignSpace.from_dict(meta["design_space"]))
        dataset.meta["normalization_bounds"] = bounds.to_dict()
    write_labeled_dataset(dataset, args.out)
    print(f"labeled {len(dataset)} configs ({dataset.provenance}) -> {args.out}")
    return EXIT_OK


def cmd_train(args) -> int:
    dataset = read_labeled_dataset(args.labeled)
    cfg = TrainConfig(
        epochs=args.epochs,
        batch_size=args.batch_size,
        learning_rate=args.lr,
        optimizer=args.optimizer,
        hidden_units=args.neurons,
        seed=args.seed,
        train_fraction=args.train_fraction,
    )
    if "normalization_bounds" in dataset.meta:
        bounds = NormalizationBounds.from_dict(dataset.meta["normalization_bounds"])
    else:
        space = DesignSpace.from_dict(dataset.meta["design_space"])
        bounds = NormalizationBounds.from_space(space)
    print(
        f"training: epochs={cfg.epochs} batch={cfg.batch_size} neurons={cfg.hidden_units} "
        f"optimizer={cfg.optimizer} lr={cfg.learning_rate} split={cfg.train_fraction:.0%}"
    )
    train_part, test_part = split(dataset, cfg.train_fraction, cfg.seed)
    net, history = train(train_part, cfg, bounds)
    save_model(net, args.out, cfg)
    print(f"final training loss {history[-1]:.6f}; held-out {len(test_part)} samples:")
    _print_report(validate(net, test_part))
    print(f"model -> {args.out}")
    return EXIT_OK


def cmd_validate(args) -> int:
    net = load_model(args.model)
    dataset = read_labeled_dataset(args.labeled)
    report = validate(net, dataset)
    _print_report(report)
    if args.report:
        report.write_csv(args.report)
        print(f"report -> {args.report}")
    return EXIT_OK


def _config_from_flags(args) -> RoomConfig | None:
    fields = (
        args.orientation,
        args.width,
        args.depth,
        args.reflectance,
        args.shading,
        args.sill_height,
        args.window_height,
        args.divisions,
    )
    if all(v is None for v in fields):
        return None
    if any(v is None for v in fields):
        raise ValueError("explain by flags requires all eight config flags")
    return RoomConfig.from_dict(
        {
            "orientation": args.orientation,
            "width": args.width,
            "depth": args.depth,
            "reflectance": args.reflectance,
            "shading": args.shading,
            "sill_height": args.sill_height,
            "window_height": args.window_height,
            "divisions": args.divisions,
        }
    )


def cmd_explain(args) -> int:
    net = load_model(args.model)
    flag_config = _config_from_flags(args)
    if flag_config is not None:
        samples = [flag_config]
    elif args.samples:
        samples, _ = read_configs(args.samples)
    else:
        raise ValueError("provide --samples or the eight config flags")

    if args.background:
        background_configs, _ = read_configs(args.background)
        background = encode_many(background_configs, net.bounds)
    else:
        encoded = encode_many(enumerate_design_space(resolve_space(args.preset)), net.bounds)
        background = sample_background(encoded, size=100, seed=args.seed)

    x = encode_many(samples, net.bounds)
    report = shap_summary(net.forward, x, background, FeatureGrouping.default())

    pred = net.forward(x)
    total = report.base[None, :] + report.phi.sum(axis=1)
    worst = float(np.max(np.abs(total - pred)))
    print(f"explained {len(samples)} sample(s); efficiency residual <= {worst:.2e}")
    for metric in METRIC_NAMES:
        ranked = ", ".join(f"{g}={v:.4f}" for g, v in report.ranking(metric)[:3])
        print(f"{metric}: top groups {ranked}")

    out_prefix = Path(args.out)
    out_prefix.parent.mkdir(parents=True, exist_ok=True)
    summary = out_prefix.with_suffix(".summary.csv")
    scatter = out_prefix.with_suffix(".scatter.csv")
    base = out_prefix.with_suffix(".base.json")
    report.write_summary_csv(summary)
    report.write_scatter_csv(scatter)
    report.write_base_json(base)
    print(f"shap report -> {summary}, {scatter}, {base}")
    return EXIT_OK


def cmd_serve(args) -> int:
    space = _space_from_args(args)
    background = None
    if args.background:
        net = load_model(args.model)
        background_configs, _ = read_configs(args.background)
        background = encode_many(background_configs, net.bounds)
    print(f"serving {args.model} on {args.bind}")
    serve(args.model, args.bind, space, background)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="luxbox",
        description="shoebox daylight/quality-view surrogate: dataset, training, explanation, service",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_space_flags(p):
        p.add_argument("--preset", choices=("table1", "table4"), default="table1")
        p.add_argument("--space", help="JSON design-space file (overrides --preset)")

    p = sub.add_parser("generate", help="enumerate a design space to a configs file")
    add_space_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("label", help="attach metric labels to a configs file")
    p.add_argument("configs")
    p.add_argument("--oracle", choices=("proxy", "ingest"), default="proxy")
    p.add_argument("--source", help="label file for --oracle ingest")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid-spacing", type=float, default=DEFAULT_GRID_SPACING)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("train", help="train the surrogate on a labeled dataset")
    p.add_argument("labeled")
    p.add_argument("--epochs", type=int, default=50)
    p.add_argument("--batch-size", type=int, default=10)
    p.add_argument("--neurons", type=int, default=40)
    p.add_argument("--lr", type=float, default=TrainConfig().learning_rate)
    p.add_argument("--optimizer", choices=("adam", "sgd"), default=TrainConfig().optimizer)
    p.add_argument("--train-fraction", type=float, default=0.8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("validate", help="evaluate a model on a labeled dataset")
    p.add_argument("model")
    p.add_argument("labeled")
    p.add_argument("--report", help="write the per-metric report CSV here")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("explain", help="exact Shapley attributions for samples")
    p.add_argument("model")
    p.add_argument("--samples", help="configs file with samples to explain")
    p.add_argument("--background", help="configs file for the background set")
    p.add_argument("--preset", choices=("table1", "table4"), default="table1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="shap_report")
    for name in ("--orientation", "--shading", "--divisions"):
        p.add_argument(name)
    for name in ("--width", "--depth", "--reflectance", "--sill-height", "--window-height"):
        p.add_argument(name, type=float)
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("serve", help="run the prediction/explanation HTTP service")
    p.add_argument("model")
    p.add_argument("--bind", default="127.0.0.1:8080")
    p.add_argument("--background", help="configs file for the explain background set")
    add_space_flags(p)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DesignSpaceError, LabelIngestError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
