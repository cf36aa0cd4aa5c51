"""Labeled datasets: assembly from the proxy oracle or ingested label files.

File formats are plain delimited text with a mandatory header row, preceded by
``#meta {json}`` metadata lines, so every artifact is digest-stable and
self-describing:

* configs file:  id + the seven design variables, one row per alternative;
* labels file:   id + the eight metric columns in METRIC_NAMES order.

IDs are enumeration indices into the design space recorded in the metadata,
which is how a labels file reconstructs its (config, metrics) pairs.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .daylight import METRIC_NAMES, MetricVector, ProxyOracle
from .scene import (
    DesignSpace,
    NormalizationBounds,
    RoomConfig,
    enumerate_design_space,
)
from .views import evaluate_views

FORMAT_CONFIGS = "luxbox-configs/1"
FORMAT_LABELS = "luxbox-labels/1"

CONFIG_COLUMNS = (
    "id",
    "orientation",
    "width",
    "depth",
    "reflectance",
    "shading",
    "sill_height",
    "window_height",
    "divisions",
)
LABEL_COLUMNS = ("id",) + METRIC_NAMES

SVD_NOTE = (
    "s_vd is a geometric stand-in (area fraction with >250 h of direct-sun "
    "over-illumination), not a validated visual-discomfort metric"
)

# Ingested view columns are advisory; geometry is authoritative.  Flag gross
# disagreement but accept the row.
INGEST_VIEW_WARN_TOLERANCE = 0.05


class LabelIngestError(ValueError):
    """Raised for malformed, incomplete, or out-of-range label files."""


@dataclass
class LabeledDataset:
    """Configs paired with their eight-metric labels, plus provenance metadata."""

    configs: list[RoomConfig]
    metrics: np.ndarray  # (n, 8) in METRIC_NAMES order
    provenance: str  # "proxy-oracle" | "ingested"
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.metrics = np.asarray(self.metrics, dtype=float)
        if self.metrics.shape != (len(self.configs), len(METRIC_NAMES)):
            raise ValueError(
                f"metrics shape {self.metrics.shape} does not match "
                f"{len(self.configs)} configs x {len(METRIC_NAMES)} metrics"
            )
        if np.any(self.metrics < 0.0) or np.any(self.metrics > 1.0):
            raise ValueError("metric values outside [0, 1]")
        seen = set()
        for c in self.configs:
            key = tuple(sorted(c.to_dict().items()))
            if key in seen:
                raise ValueError(f"duplicate config in dataset: {c.to_dict()}")
            seen.add(key)

    def __len__(self) -> int:
        return len(self.configs)

    def metric_vector(self, i: int) -> MetricVector:
        return MetricVector.from_array(self.metrics[i])


def _view_metric_rows(configs: list[RoomConfig], oracle: ProxyOracle) -> np.ndarray:
    """(n, 3) exact view metrics (range, depth, factor); geometry cached per shape."""
    cache: dict = {}
    rows = np.empty((len(configs), 3))
    for i, c in enumerate(configs):
        key = (c.width, c.depth, c.sill_height, c.window_height, c.divisions)
        if key not in cache:
            res = evaluate_views(c, oracle.grid_for(c))
            cache[key] = (
                res.view_range_fraction,
                res.view_depth_fraction,
                res.view_factor_fraction,
            )
        rows[i] = cache[key]
    return rows


def label_dataset(
    configs: list[RoomConfig],
    mode: str = "proxy",
    source: str | Path | None = None,
    oracle: ProxyOracle | None = None,
) -> LabeledDataset:
    """Label configs with the proxy oracle or an externally simulated file.

    The three view metrics always come from exact geometry; the five
    daylight/glare metrics come from the oracle (proxy mode) or from
    ``source`` (ingest mode).  Output order matches the input config order.
    """
    if mode not in ("proxy", "ingest"):
        raise ValueError(f"unknown labeling mode '{mode}'")
    oracle = oracle or ProxyOracle()

    views = _view_metric_rows(configs, oracle)
    meta = {
        "seed": oracle.seed,
        "location": {
            "latitude": oracle.location.latitude,
            "longitude": oracle.location.longitude,
            "tz_meridian": oracle.location.tz_meridian,
        },
        "schedule": {
            "start_hour": oracle.schedule.start_hour,
            "end_hour": oracle.schedule.end_hour,
        },
        "grid": {
            "spacing": oracle.grid_spacing,
            "workplane": oracle.workplane,
            "wall_offset": oracle.wall_offset,
        },
        "notes": [SVD_NOTE],
    }

    n = len(configs)
    metrics = np.empty((n, len(METRIC_NAMES)))
    metrics[:, 5:8] = views

    if mode == "proxy":
        daylight = oracle.metrics_many(configs)
        for i, d in enumerate(daylight):
            metrics[i, 0:5] = (d.udi, d.m_da, d.s_da, d.ase, d.s_vd)
        return LabeledDataset(configs, metrics, "proxy-oracle", meta)

    if source is None:
        raise LabelIngestError("ingest mode requires a label source file")
    file_meta, ids, values = read_label_rows(source)
    by_id = {int(i): values[k] for k, i in enumerate(ids)}
    missing = [i for i in range(n) if i not in by_id]
    if missing:
        raise LabelIngestError(
            f"label file covers {len(by_id)} rows but {n} configs expected; "
            f"missing config ids: {missing[:20]}{'...' if len(missing) > 20 else ''}"
        )
    extra = sorted(set(by_id) - set(range(n)))
    if extra:
        raise LabelIngestError(f"label file has rows for unknown config ids: {extra[:20]}")

    for i in range(n):
        row = by_id[i]
        if np.any(row < 0.0) or np.any(row > 1.0):
            bad = [
                f"{name}={row[j]:g}" for j, name in enumerate(METRIC_NAMES)
                if row[j] < 0.0 or row[j] > 1.0
            ]
            raise LabelIngestError(f"rejected row id={i}: metric out of [0, 1]: {', '.join(bad)}")
        metrics[i, 0:5] = row[0:5]
        drift = np.abs(row[5:8] - views[i])
        if np.any(drift > INGEST_VIEW_WARN_TOLERANCE):
            warnings.warn(
                f"ingested view metrics for config {i} differ from exact geometry "
                f"by up to {drift.max():.3f}; geometric values kept",
                UserWarning,
            )
    meta["engine"] = file_meta.get("engine", file_meta.get("meta", {}))
    return LabeledDataset(configs, metrics, "ingested", meta)


# ---------------------------------------------------------------------------
# file I/O


def _write_with_meta(path: str | Path, meta: dict, header: str, rows) -> None:
    with open(path, "w") as fh:
        fh.write(f"#meta {json.dumps(meta, sort_keys=True)}\n")
        fh.write(header + "\n")
        for row in rows:
            fh.write(row + "\n")


def _read_with_meta(path: str | Path) -> tuple[dict, list[list[str]]]:
    meta: dict = {}
    rows: list[list[str]] = []
    header: list[str] | None = None
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#meta "):
                meta = json.loads(line[len("#meta "):])
                continue
            if line.startswith("#"):
                continue
            if header is None:
                header = [c.strip() for c in line.split(",")]
                continue
            rows.append([c.strip() for c in line.split(",")])
    if header is None:
        raise LabelIngestError(f"{path}: missing mandatory header row")
    meta["_header"] = header
    return meta, rows


def write_configs(
    configs: list[RoomConfig], path: str | Path, space: DesignSpace | None = None, extra_meta: dict | None = None
) -> None:
    meta = {"format": FORMAT_CONFIGS, "count": len(configs)}
    if space is not None:
        meta["design_space"] = space.to_dict()
    if extra_meta:
        meta.update(extra_meta)
    rows = (
        f"{i},{c.orientation.value},{c.width!r},{c.depth!r},{c.reflectance!r},"
        f"{c.shading.value},{c.sill_height!r},{c.window_height!r},{c.divisions.value}"
        for i, c in enumerate(configs)
    )
    _write_with_meta(path, meta, ",".join(CONFIG_COLUMNS), rows)


def read_configs(path: str | Path) -> tuple[list[RoomConfig], dict]:
    meta, rows = _read_with_meta(path)
    header = meta.pop("_header")
    if tuple(header) != CONFIG_COLUMNS:
        raise LabelIngestError(f"{path}: unexpected config header {header}")
    configs = []
    for r in rows:
        d = dict(zip(CONFIG_COLUMNS, r))
        configs.append(RoomConfig.from_dict(d))
    return configs, meta


def write_labeled_dataset(dataset: LabeledDataset, path: str | Path) -> None:
    meta = {
        "format": FORMAT_LABELS,
        "provenance": dataset.provenance,
        "count": len(dataset),
        **dataset.meta,
    }
    rows = (
        f"{i}," + ",".join(repr(float(v)) for v in dataset.metrics[i])
        for i in range(len(dataset))
    )
    _write_with_meta(path, meta, ",".join(LABEL_COLUMNS), rows)


def read_label_rows(path: str | Path) -> tuple[dict, np.ndarray, np.ndarray]:
    """Raw rows of a labels file: (meta, ids, (n, 8) values)."""
    meta, rows = _read_with_meta(path)
    header = meta.pop("_header")
    if tuple(header) != LABEL_COLUMNS:
        raise LabelIngestError(
            f"{path}: header must be {','.join(LABEL_COLUMNS)}, got {','.join(header)}"
        )
    ids = np.empty(len(rows), dtype=int)
    values = np.empty((len(rows), len(METRIC_NAMES)))
    for k, r in enumerate(rows):
        if len(r) != len(LABEL_COLUMNS):
            raise LabelIngestError(f"{path}: row {k} has {len(r)} columns")
        try:
            ids[k] = int(r[0])
            values[k] = [float(v) for v in r[1:]]
        except ValueError as exc:
            raise LabelIngestError(f"{path}: row {k}: {exc}") from exc
    return meta, ids, values


def read_labeled_dataset(path: str | Path) -> LabeledDataset:
    """Load a labels file, reconstructing configs from the design space metadata."""
    meta, ids, values = read_label_rows(path)
    if "design_space" not in meta:
        raise LabelIngestError(f"{path}: metadata lacks the design_space block")
    space = DesignSpace.from_dict(meta["design_space"])
    all_configs = enumerate_design_space(space)
    try:
        configs = [all_configs[int(i)] for i in ids]
    except IndexError as exc:
        raise LabelIngestError(f"{path}: config id outside the design space: {exc}") from exc
    provenance = meta.pop("provenance", "ingested")
    return LabeledDataset(configs, values, provenance, meta)


def training_bounds(space: DesignSpace) -> NormalizationBounds:
    return NormalizationBounds.from_space(space)
