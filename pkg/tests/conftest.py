"""Session-scoped fixtures: labeling the full design space once keeps the suite fast."""

import pytest

import luxbox as lb


@pytest.fixture(scope="session")
def oracle():
    return lb.ProxyOracle(seed=42)


@pytest.fixture(scope="session")
def table1_configs():
    return lb.enumerate_design_space(lb.TRAINING_SPACE)


@pytest.fixture(scope="session")
def table4_configs():
    return lb.enumerate_design_space(lb.VALIDATION_SPACE)


@pytest.fixture(scope="session")
def bounds():
    return lb.NormalizationBounds.from_space(lb.TRAINING_SPACE)


@pytest.fixture(scope="session")
def labeled_table1(oracle, table1_configs):
    return lb.label_dataset(table1_configs, "proxy", oracle=oracle)


@pytest.fixture(scope="session")
def labeled_table4(oracle, table4_configs):
    return lb.label_dataset(table4_configs, "proxy", oracle=oracle)


@pytest.fixture(scope="session")
def trained(labeled_table1, bounds):
    cfg = lb.TrainConfig(seed=0)
    train_part, test_part = lb.split(labeled_table1, cfg.train_fraction, cfg.seed)
    net, history = lb.train(train_part, cfg, bounds)
    return {
        "net": net,
        "history": history,
        "train": train_part,
        "test": test_part,
        "cfg": cfg,
    }
