import numpy as np
import pytest


@pytest.fixture(scope="session")
def overfit_engine():
    """Engine loaded from the tiny-overfit checkpoint (trains it if absent)."""
    import overfit_utils

    return overfit_utils.load_overfit_engine()


@pytest.fixture(scope="session")
def overfit_dataset():
    import overfit_utils
    from sketchrecon.dataset import DatasetView

    return DatasetView(overfit_utils.ensure_overfit_dataset())


def pytest_configure(config):
    config.addinivalue_line("markers", "overfit: needs the tiny-overfit artifacts")
