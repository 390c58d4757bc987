import numpy as np
import pytest


def pytest_addoption(parser):
    parser.addoption(
        "--runheavy",
        action="store_true",
        default=False,
        help="run long checks (large L rows, slow thresholds)",
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runheavy"):
        return
    skip = pytest.mark.skip(reason="needs --runheavy")
    for item in items:
        if "heavy" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20170612)


@pytest.fixture(scope="session")
def reality_thresholds():
    """Computed thresholds for L = 4, 5, 6, shared by several tests."""
    from genus5chain import lattice

    return {L: lattice.reality_threshold(L) for L in (4, 5, 6)}
