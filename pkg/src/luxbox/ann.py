"""Single-hidden-layer feedforward network for the eight metrics, from scratch.

Architecture: 10 inputs -> H rectified hidden units (default 40) -> 8 sigmoid
outputs, trained on mean-squared error with mini-batch gradient descent.  The
sigmoid output keeps every prediction inside [0, 1] to match the fraction
targets.  All randomness (initialization, epoch shuffles, splits) flows from
explicit seeds, so a fixed seed reproduces the final parameters bit for bit.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .daylight import METRIC_NAMES
from .datasets import LabeledDataset
from .scene import N_FEATURES, NormalizationBounds, encode_many

INPUT_SIZE = N_FEATURES
OUTPUT_SIZE = len(METRIC_NAMES)
DEFAULT_HIDDEN_UNITS = 40

MODEL_FORMAT = "luxbox-model/1"

# Published errors of the simulation-trained reference model this package is
# benchmarked against; reported alongside validation results, never asserted.
BENCHMARK_MAE = {
    "udi": 0.022,
    "m_da": 0.019,
    "s_da": 0.042,
    "s_vd": 0.047,
    "ase": 0.031,
    "view_range": 0.06,
    "view_depth": 0.018,
    "view_factor": 0.03,
}
BENCHMARK_MSE = {
    "udi": 0.0008,
    "m_da": 0.0006,
    "s_da": 0.003,
    "s_vd": 0.003,
    "ase": 0.003,
    "view_range": 0.007,
    "view_depth": 0.0017,
    "view_factor": 0.0015,
}


def _relu(z: np.ndarray) -> np.ndarray:
    return np.maximum(z, 0.0)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


@dataclass
class TrainConfig:
    """Training hyperparameters; epoch/batch/split defaults follow the study setup."""

    epochs: int = 50
    batch_size: int = 10
    learning_rate: float = 0.005
    optimizer: str = "adam"  # "adam" | "sgd"
    momentum: float = 0.9
    hidden_units: int = DEFAULT_HIDDEN_UNITS
    seed: int = 0
    train_fraction: float = 0.8

    def __post_init__(self) -> None:
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must lie in (0, 1)")
        if self.optimizer not in ("sgd", "adam"):
            raise ValueError(f"unknown optimizer '{self.optimizer}'")

    def to_dict(self) -> dict:
        return {
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "learning_rate": self.learning_rate,
            "optimizer": self.optimizer,
            "momentum": self.momentum,
            "hidden_units": self.hidden_units,
            "seed": self.seed,
            "train_fraction": self.train_fraction,
        }


@dataclass
class SurrogateNet:
    """Weights/biases plus the feature-normalization state they were trained with."""

    w1: np.ndarray  # (hidden, 10)
    b1: np.ndarray  # (hidden,)
    w2: np.ndarray  # (8, hidden)
    b2: np.ndarray  # (8,)
    bounds: NormalizationBounds
    seed: int = 0

    def __post_init__(self) -> None:
        h = self.w1.shape[0]
        if self.w1.shape != (h, INPUT_SIZE) or self.b1.shape != (h,):
            raise ValueError(f"hidden layer shapes inconsistent: {self.w1.shape}, {self.b1.shape}")
        if self.w2.shape != (OUTPUT_SIZE, h) or self.b2.shape != (OUTPUT_SIZE,):
            raise ValueError(f"output layer shapes inconsistent: {self.w2.shape}, {self.b2.shape}")
        for p in (self.w1, self.b1, self.w2, self.b2):
            if not np.all(np.isfinite(p)):
                raise ValueError("non-finite parameter")

    @property
    def hidden_units(self) -> int:
        return self.w1.shape[0]

    def forward(self, x: np.ndarray) -> np.ndarray:
        """Predict metric fractions for one (10,) input or an (n, 10) batch."""
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        xb = x[None, :] if single else x
        if xb.shape[1] != INPUT_SIZE:
            raise ValueError(f"expected {INPUT_SIZE} inputs, got {xb.shape[1]}")
        y = _sigmoid(_relu(xb @ self.w1.T + self.b1) @ self.w2.T + self.b2)
        return y[0] if single else y

    def parameters(self) -> tuple[np.ndarray, ...]:
        return (self.w1, self.b1, self.w2, self.b2)


def init_net(bounds: NormalizationBounds, hidden_units: int = DEFAULT_HIDDEN_UNITS, seed: int = 0) -> SurrogateNet:
    """Seeded uniform initialization scaled by fan-in: U(-1/sqrt(fan_in), +)."""
    rng = np.random.default_rng(seed)
    s1 = 1.0 / np.sqrt(INPUT_SIZE)
    s2 = 1.0 / np.sqrt(hidden_units)
    return SurrogateNet(
        w1=rng.uniform(-s1, s1, (hidden_units, INPUT_SIZE)),
        b1=np.zeros(hidden_units),
        w2=rng.uniform(-s2, s2, (OUTPUT_SIZE, hidden_units)),
        b2=np.zeros(OUTPUT_SIZE),
        bounds=bounds,
        seed=seed,
    )


def batch_loss(net: SurrogateNet, x: np.ndarray, y: np.ndarray) -> float:
    """Mean squared error over every (sample, output) entry of the batch."""
    pred = net.forward(x)
    return float(np.mean((pred - y) ** 2))


def gradients(net: SurrogateNet, x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, ...]:
    """Backpropagated gradients of batch_loss w.r.t. (w1, b1, w2, b2)."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.atleast_2d(np.asarray(y, dtype=float))
    if len(x) == 0:
        raise ValueError("empty batch")
    n = x.shape[0]

    z1 = x @ net.w1.T + net.b1
    a1 = _relu(z1)
    z2 = a1 @ net.w2.T + net.b2
    out = _sigmoid(z2)

    # d loss / d z2 through the sigmoid; loss averages over n * OUTPUT_SIZE entries
    d_out = 2.0 * (out - y) / (n * OUTPUT_SIZE)
    d_z2 = d_out * out * (1.0 - out)
    d_w2 = d_z2.T @ a1
    d_b2 = d_z2.sum(axis=0)
    d_a1 = d_z2 @ net.w2
    d_z1 = d_a1 * (z1 > 0.0)
    d_w1 = d_z1.T @ x
    d_b1 = d_z1.sum(axis=0)
    return d_w1, d_b1, d_w2, d_b2


def split(dataset: LabeledDataset, fraction: float = 0.8, seed: int = 0) -> tuple[LabeledDataset, LabeledDataset]:
    """Seeded shuffle-then-split into (floor(n * fraction), remainder) parts."""
    if not 0.0 < fraction < 1.0:
        raise ValueError("fraction must lie in (0, 1)")
    n = len(dataset)
    if n < 2:
        raise ValueError("need at least two samples to split")
    order = np.random.default_rng(seed).permutation(n)
    n_train = int(np.floor(n * fraction))
    tr, te = order[:n_train], order[n_train:]

    def take(idx):
        return LabeledDataset(
            [dataset.configs[i] for i in idx],
            dataset.metrics[idx],
            dataset.provenance,
            dict(dataset.meta),
        )

    return take(tr), take(te)


def train_arrays(
    x: np.ndarray, y: np.ndarray, cfg: TrainConfig, bounds: NormalizationBounds
) -> tuple[SurrogateNet, list[float]]:
    """Mini-batch training loop; returns the net and per-epoch mean training loss."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) == 0:
        raise ValueError("empty training set")
    if x.shape[0] != y.shape[0]:
        raise ValueError("inputs and targets differ in length")

    net = init_net(bounds, cfg.hidden_units, cfg.seed)
    rng = np.random.default_rng(cfg.seed + 1)  # shuffle stream separate from init

    velocity = [np.zeros_like(p) for p in net.parameters()]
    adam_m = [np.zeros_like(p) for p in net.parameters()]
    adam_v = [np.zeros_like(p) for p in net.parameters()]
    beta1, beta2, eps = 0.9, 0.999, 1e-8
    step = 0

    history: list[float] = []
    n = x.shape[0]
    for _ in range(cfg.epochs):
        order = rng.permutation(n)
        losses = []
        for start in range(0, n, cfg.batch_size):
            idx = order[start : start + cfg.batch_size]
            xb, yb = x[idx], y[idx]
            losses.append(batch_loss(net, xb, yb) * len(idx))
            grads = gradients(net, xb, yb)
            params = list(net.parameters())
            step += 1
            for j, (p, g) in enumerate(zip(params, grads)):
                if cfg.optimizer == "sgd":
                    velocity[j] = cfg.momentum * velocity[j] - cfg.learning_rate * g
                    params[j] = p + velocity[j]
                else:
                    adam_m[j] = beta1 * adam_m[j] + (1 - beta1) * g
                    adam_v[j] = beta2 * adam_v[j] + (1 - beta2) * g * g
                    m_hat = adam_m[j] / (1 - beta1**step)
                    v_hat = adam_v[j] / (1 - beta2**step)
                    params[j] = p - cfg.learning_rate * m_hat / (np.sqrt(v_hat) + eps)
            net.w1, net.b1, net.w2, net.b2 = params
        history.append(sum(losses) / n)
    return net, history


def train(dataset: LabeledDataset, cfg: TrainConfig, bounds: NormalizationBounds) -> tuple[SurrogateNet, list[float]]:
    """Encode a labeled dataset with the given bounds and train on it."""
    if len(dataset) == 0:
        raise ValueError("empty dataset")
    x = encode_many(dataset.configs, bounds)
    return train_arrays(x, dataset.metrics, cfg, bounds)


def mae(pred, target) -> float:
    """Mean absolute error sum(|y - yhat|) / n over aligned arrays."""
    pred = np.asarray(pred, dtype=float)
    target = np.asarray(target, dtype=float)
    if pred.shape != target.shape:
        raise ValueError(f"shape mismatch: {pred.shape} vs {target.shape}")
    if pred.size == 0:
        raise ValueError("need at least one sample")
    return float(np.mean(np.abs(pred - target)))


def mse(pred, target) -> float:
    """Mean squared error sum((y - yhat)^2) / n over aligned arrays."""
    pred = np.asarray(pred, dtype=float)
    target = np.asarray(target, dtype=float)
    if pred.shape != target.shape:
        raise ValueError(f"shape mismatch: {pred.shape} vs {target.shape}")
    if pred.size == 0:
        raise ValueError("need at least one sample")
    return float(np.mean((pred - target) ** 2))


@dataclass
class EvalReport:
    """Per-metric MAE/MSE over a dataset, with residuals kept for inspection."""

    metric_names: tuple
    mae: np.ndarray  # (8,)
    mse: np.ndarray  # (8,)
    n: int
    residuals: np.ndarray  # (n, 8) prediction - target

    def rows(self) -> list[dict]:
        """Report rows including the published benchmark columns."""
        return [
            {
                "metric": name,
                "mae": float(self.mae[i]),
                "mse": float(self.mse[i]),
                "benchmark_mae": BENCHMARK_MAE[name],
                "benchmark_mse": BENCHMARK_MSE[name],
            }
            for i, name in enumerate(self.metric_names)
        ]

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w") as fh:
            fh.write(f"#meta {json.dumps({'n': self.n, 'format': 'luxbox-report/1'})}\n")
            fh.write("metric,mae,mse,benchmark_mae,benchmark_mse\n")
            for r in self.rows():
                fh.write(
                    f"{r['metric']},{r['mae']!r},{r['mse']!r},"
                    f"{r['benchmark_mae']!r},{r['benchmark_mse']!r}\n"
                )


def validate(net: SurrogateNet, dataset: LabeledDataset) -> EvalReport:
    """Per-metric errors of the net on a labeled dataset (encoded with the net's bounds)."""
    x = encode_many(dataset.configs, net.bounds)
    pred = net.forward(x)
    residuals = pred - dataset.metrics
    return EvalReport(
        metric_names=METRIC_NAMES,
        mae=np.mean(np.abs(residuals), axis=0),
        mse=np.mean(residuals**2, axis=0),
        n=len(dataset),
        residuals=residuals,
    )


# ---------------------------------------------------------------------------
# persistence


def save_model(net: SurrogateNet, path: str | Path, train_config: TrainConfig | None = None) -> None:
    doc = {
        "format": MODEL_FORMAT,
        "input_size": INPUT_SIZE,
        "hidden_units": net.hidden_units,
        "output_size": OUTPUT_SIZE,
        "hidden_activation": "relu",
        "output_activation": "sigmoid",
        "metric_names": list(METRIC_NAMES),
        "seed": net.seed,
        "bounds": net.bounds.to_dict(),
        "w1": net.w1.tolist(),
        "b1": net.b1.tolist(),
        "w2": net.w2.tolist(),
        "b2": net.b2.tolist(),
    }
    if train_config is not None:
        doc["train_config"] = train_config.to_dict()
    Path(path).write_text(json.dumps(doc))


def load_model(path: str | Path) -> SurrogateNet:
    doc = json.loads(Path(path).read_text())
    if doc.get("format") != MODEL_FORMAT:
        raise ValueError(f"{path}: not a {MODEL_FORMAT} file")
    return SurrogateNet(
        w1=np.array(doc["w1"], dtype=float),
        b1=np.array(doc["b1"], dtype=float),
        w2=np.array(doc["w2"], dtype=float),
        b2=np.array(doc["b2"], dtype=float),
        bounds=NormalizationBounds.from_dict(doc["bounds"]),
        seed=int(doc.get("seed", 0)),
    )


def model_digest(path: str | Path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()
