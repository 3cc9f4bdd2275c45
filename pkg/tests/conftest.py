import pytest

from vortexgrip.config import Config
from vortexgrip.protocol import augment, generate_dataset, standard_plan


@pytest.fixture(scope="session")
def config():
    return Config()


@pytest.fixture(scope="session")
def plan_timing():
    """Wall-clock seconds of the heavyweight pipeline stages, shared so the
    acceptance budget check can account for work done in fixtures."""
    return {}


@pytest.fixture(scope="session")
def full_dataset(config, plan_timing):
    """The 4920-record synthetic factorial dataset (noise 0.05)."""
    import time
    t0 = time.perf_counter()
    dataset = generate_dataset(standard_plan(), noise_sd=0.05,
                               master_seed=config.default_seed,
                               config=config, workers=2)
    plan_timing["generate"] = time.perf_counter() - t0
    return dataset


@pytest.fixture(scope="session")
def augmented_dataset(full_dataset):
    return augment(full_dataset)
