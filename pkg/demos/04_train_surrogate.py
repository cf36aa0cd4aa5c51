#!/usr/bin/env python3
"""End-to-end surrogate run: label, train, and validate on unseen alternatives.

Labels the 2880-alternative training space with the proxy oracle, trains the
10-40-8 network on an 80/20 split, then scores it on the 64 validation
alternatives whose variable values never appear in training.  Takes about
half a minute.
"""

import numpy as np

import luxbox as lb
from luxbox.ann import BENCHMARK_MAE

oracle = lb.ProxyOracle(seed=42)
bounds = lb.NormalizationBounds.from_space(lb.TRAINING_SPACE)

print("labeling 2880 training alternatives...")
dataset = lb.label_dataset(lb.enumerate_design_space(lb.TRAINING_SPACE), "proxy", oracle=oracle)

cfg = lb.TrainConfig(seed=0)  # epochs 50, batch 10, 40 hidden units, 80/20 split
train_part, holdout = lb.split(dataset, cfg.train_fraction, cfg.seed)
print(f"training on {len(train_part)} samples, holding out {len(holdout)}...")
net, history = lb.train(train_part, cfg, bounds)
print(f"training loss: {history[0]:.5f} (epoch 1) -> {history[-1]:.5f} (epoch {cfg.epochs})")

print("\nlabeling the 64-alternative validation space...")
validation = lb.label_dataset(lb.enumerate_design_space(lb.VALIDATION_SPACE), "proxy", oracle=oracle)
report = lb.validate(net, validation)

print(f"\nvalidation errors over n={report.n} unseen alternatives")
print(f"{'metric':12s} {'MAE':>8} {'MSE':>9} {'benchmark MAE':>14}")
for row in report.rows():
    print(f"{row['metric']:12s} {row['mae']:8.4f} {row['mse']:9.5f} {row['benchmark_mae']:14.4f}")
print(f"{'mean':12s} {np.mean(report.mae):8.4f} {np.mean(report.mse):9.5f} "
      f"{np.mean(list(BENCHMARK_MAE.values())):14.4f}")

lb.save_model(net, "surrogate.json", cfg)
report.write_csv("validation_report.csv")
print("\nmodel -> surrogate.json, report -> validation_report.csv")
print("serve it with:  luxbox serve surrogate.json --bind 127.0.0.1:8080")
