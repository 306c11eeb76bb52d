import logging
import numpy as np
import pytest
from src.shared.conf import Config
from src.algebra.representation import build_standard_rep

logger = logging.getLogger("TESTS")


@pytest.fixture(scope="session")
def rep():
    return build_standard_rep()


@pytest.fixture
def rng():
    logger.info(f"Random sweeps seeded with {Config.RANDOM_SEED}")
    return np.random.default_rng(Config.RANDOM_SEED)
