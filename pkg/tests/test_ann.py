import numpy as np
import pytest

import luxbox as lb
from luxbox.ann import (
    INPUT_SIZE,
    OUTPUT_SIZE,
    batch_loss,
    gradients,
    init_net,
    train_arrays,
)

def zero_net(bounds, hidden=5):
    return lb.SurrogateNet(
        w1=np.zeros((hidden, INPUT_SIZE)),
        b1=np.zeros(hidden),
        w2=np.zeros((OUTPUT_SIZE, hidden)),
        b2=np.zeros(OUTPUT_SIZE),
        bounds=bounds,
    )


def finite_difference_grads(net, x, y, eps=1e-5):
    """Central-difference oracle for the loss gradient, parameter by parameter."""
    grads = []
    for p in net.parameters():
        g = np.zeros_like(p)
        flat_p, flat_g = p.ravel(), g.ravel()
        for i in range(flat_p.size):
            orig = flat_p[i]
            flat_p[i] = orig + eps
            up = batch_loss(net, x, y)
            flat_p[i] = orig - eps
            down = batch_loss(net, x, y)
            flat_p[i] = orig
            flat_g[i] = (up - down) / (2.0 * eps)
        grads.append(g)
    return grads


def max_relative_error(a_list, b_list):
    worst = 0.0
    for a, b in zip(a_list, b_list):
        denom = np.maximum(np.maximum(np.abs(a), np.abs(b)), 1e-8)
        worst = max(worst, float(np.max(np.abs(a - b) / denom)))
    return worst


class TestForward:
    def test_zero_net_outputs_half(self, bounds):
        net = zero_net(bounds)
        out = net.forward(np.random.default_rng(0).random(INPUT_SIZE))
        assert np.allclose(out, 0.5)

    def test_zero_hidden_weights_input_independent(self, bounds):
        net = zero_net(bounds)
        net.b1 = np.arange(5, dtype=float) * 0.1
        rng = np.random.default_rng(1)
        a = net.forward(rng.random(INPUT_SIZE))
        b = net.forward(rng.random(INPUT_SIZE))
        assert np.array_equal(a, b)

    def test_forward_deterministic(self, bounds):
        net = init_net(bounds, seed=3)
        x = np.random.default_rng(4).random(INPUT_SIZE)
        assert np.array_equal(net.forward(x), net.forward(x))

    def test_output_bounded_for_wild_inputs(self, bounds):
        net = init_net(bounds, seed=5)
        rng = np.random.default_rng(6)
        x = rng.normal(scale=50.0, size=(100, INPUT_SIZE))
        out = net.forward(x)
        assert np.all(out > 0.0) and np.all(out < 1.0)

    def test_dimension_mismatch_rejected(self, bounds):
        net = init_net(bounds, seed=0)
        with pytest.raises(ValueError):
            net.forward(np.zeros(7))


class TestGradients:
    def test_matches_finite_differences(self, bounds):
        worst = 0.0
        for seed in range(5):
            rng = np.random.default_rng(100 + seed)
            net = init_net(bounds, hidden_units=8, seed=seed)
            x = rng.random((6, INPUT_SIZE))
            y = rng.random((6, OUTPUT_SIZE))
            analytic = gradients(net, x, y)
            numeric = finite_difference_grads(net, x, y)
            worst = max(worst, max_relative_error(analytic, numeric))
        assert worst < 1e-4

    def test_zero_at_perfect_fit(self, bounds):
        net = init_net(bounds, hidden_units=6, seed=1)
        x = np.random.default_rng(2).random((4, INPUT_SIZE))
        y = net.forward(x)  # targets equal predictions exactly
        for g in gradients(net, x, y):
            assert np.max(np.abs(g)) < 1e-12

    def test_gradients_linear_in_residual(self, bounds):
        net = init_net(bounds, hidden_units=6, seed=7)
        x = np.random.default_rng(8).random((5, INPUT_SIZE))
        out = net.forward(x)
        r = np.random.default_rng(9).normal(scale=0.05, size=out.shape)
        g1 = gradients(net, x, out - r)
        g3 = gradients(net, x, out - 3.0 * r)
        for a, b in zip(g1, g3):
            assert np.allclose(3.0 * a, b, rtol=1e-12, atol=1e-15)

    def test_empty_batch_rejected(self, bounds):
        net = init_net(bounds, seed=0)
        with pytest.raises(ValueError):
            gradients(net, np.empty((0, INPUT_SIZE)), np.empty((0, OUTPUT_SIZE)))


class TestSplit:
    def test_published_split_sizes(self, labeled_table1):
        train_part, test_part = lb.split(labeled_table1, 0.8, seed=0)
        assert (len(train_part), len(test_part)) == (2304, 576)

    def test_same_seed_same_split(self, labeled_table1):
        a1, b1 = lb.split(labeled_table1, 0.8, seed=42)
        a2, b2 = lb.split(labeled_table1, 0.8, seed=42)
        assert a1.configs == a2.configs and b1.configs == b2.configs

    def test_partition(self, labeled_table1):
        a, b = lb.split(labeled_table1, 0.8, seed=1)
        keys = lambda ds: {tuple(sorted(c.to_dict().items())) for c in ds.configs}
        ka, kb = keys(a), keys(b)
        assert not ka & kb
        assert len(ka | kb) == len(labeled_table1)

    def test_too_small_rejected(self, labeled_table1):
        tiny = lb.LabeledDataset(
            labeled_table1.configs[:1], labeled_table1.metrics[:1], "proxy-oracle"
        )
        with pytest.raises(ValueError):
            lb.split(tiny, 0.8, seed=0)


class TestErrors:
    def test_identical_vectors(self):
        v = np.array([0.2, 0.4, 0.9])
        assert lb.mae(v, v) == 0.0
        assert lb.mse(v, v) == 0.0

    def test_constant_residual(self):
        target = np.zeros(17)
        pred = np.full(17, 0.1)
        assert lb.mae(pred, target) == pytest.approx(0.1)
        assert lb.mse(pred, target) == pytest.approx(0.01)

    def test_hand_computed_pair(self):
        pred = np.array([0.1, 0.3])
        target = np.zeros(2)
        assert lb.mae(pred, target) == pytest.approx(0.2)
        assert lb.mse(pred, target) == pytest.approx(0.05)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            lb.mae(np.zeros(3), np.zeros(4))
        with pytest.raises(ValueError):
            lb.mse(np.zeros(3), np.zeros(4))


class TestTraining:
    def test_overfits_single_repeated_sample(self, bounds):
        rng = np.random.default_rng(11)
        x = np.tile(rng.random(INPUT_SIZE), (20, 1))
        y = np.tile(rng.uniform(0.2, 0.8, OUTPUT_SIZE), (20, 1))
        cfg = lb.TrainConfig(seed=0)
        net, history = train_arrays(x, y, cfg, bounds)
        assert lb.mse(net.forward(x), y) < 1e-4
        assert len(history) == cfg.epochs

    def test_training_deterministic(self, bounds, labeled_table1):
        small = lb.LabeledDataset(
            labeled_table1.configs[:64], labeled_table1.metrics[:64], "proxy-oracle"
        )
        cfg = lb.TrainConfig(epochs=5, seed=9)
        n1, h1 = lb.train(small, cfg, bounds)
        n2, h2 = lb.train(small, cfg, bounds)
        assert h1 == h2
        for a, b in zip(n1.parameters(), n2.parameters()):
            assert np.array_equal(a, b)

    def test_loss_history_mostly_nonincreasing(self, trained):
        history = trained["history"]
        assert len(history) == trained["cfg"].epochs
        for i in range(5, len(history) - 1):
            assert history[i + 1] <= history[i] * 1.05

    def test_empty_dataset_rejected(self, bounds):
        with pytest.raises(ValueError):
            train_arrays(np.empty((0, INPUT_SIZE)), np.empty((0, OUTPUT_SIZE)), lb.TrainConfig(), bounds)

    def test_sgd_option_also_learns(self, bounds, labeled_table1):
        small = lb.LabeledDataset(
            labeled_table1.configs[:256], labeled_table1.metrics[:256], "proxy-oracle"
        )
        cfg = lb.TrainConfig(optimizer="sgd", learning_rate=0.01, epochs=20, seed=0)
        net, history = lb.train(small, cfg, bounds)
        assert history[-1] < history[0]


class TestValidate:
    def test_perfect_predictor_zero_report(self, bounds, labeled_table1):
        net = init_net(bounds, seed=13)
        configs = labeled_table1.configs[:10]
        x = lb.encode_many(configs, bounds)
        ds = lb.LabeledDataset(configs, net.forward(x), "proxy-oracle")
        report = lb.validate(net, ds)
        assert np.all(report.mae == 0.0) and np.all(report.mse == 0.0)

    def test_report_shape_and_order(self, trained, labeled_table4):
        report = lb.validate(trained["net"], labeled_table4)
        rows = report.rows()
        assert [r["metric"] for r in rows] == list(lb.METRIC_NAMES)
        assert report.n == 64
        assert {"benchmark_mae", "benchmark_mse"} <= set(rows[0])

    def test_error_bounds_vs_residuals(self, trained, labeled_table4):
        report = lb.validate(trained["net"], labeled_table4)
        worst = np.max(np.abs(report.residuals), axis=0)
        assert np.all(report.mae <= worst + 1e-15)
        assert np.all(report.mse <= worst**2 + 1e-15)


class TestPersistence:
    def test_round_trip_exact(self, trained, tmp_path):
        path = tmp_path / "model.json"
        lb.save_model(trained["net"], path, trained["cfg"])
        loaded = lb.load_model(path)
        for a, b in zip(trained["net"].parameters(), loaded.parameters()):
            assert np.array_equal(a, b)
        assert np.array_equal(loaded.bounds.lo, trained["net"].bounds.lo)
        assert np.array_equal(loaded.bounds.hi, trained["net"].bounds.hi)
        x = np.random.default_rng(3).random((5, INPUT_SIZE))
        assert np.array_equal(loaded.forward(x), trained["net"].forward(x))

    def test_same_seed_byte_identical_files(self, bounds, labeled_table1, tmp_path):
        small = lb.LabeledDataset(
            labeled_table1.configs[:64], labeled_table1.metrics[:64], "proxy-oracle"
        )
        cfg = lb.TrainConfig(epochs=3, seed=4)
        p1, p2 = tmp_path / "m1.json", tmp_path / "m2.json"
        lb.save_model(lb.train(small, cfg, bounds)[0], p1, cfg)
        lb.save_model(lb.train(small, cfg, bounds)[0], p2, cfg)
        assert p1.read_bytes() == p2.read_bytes()

    def test_rejects_foreign_file(self, tmp_path):
        path = tmp_path / "foreign.json"
        path.write_text('{"format": "something-else"}')
        with pytest.raises(ValueError):
            lb.load_model(path)


class TestTrainConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            lb.TrainConfig(epochs=0)
        with pytest.raises(ValueError):
            lb.TrainConfig(train_fraction=1.0)
        with pytest.raises(ValueError):
            lb.TrainConfig(batch_size=0)
        with pytest.raises(ValueError):
            lb.TrainConfig(optimizer="lbfgs")
