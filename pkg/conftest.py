import logging
import os
import sys

import pytest
from hypothesis import settings

ROOT = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, ROOT)

from config import CONFIG_ENV_VAR  # noqa: E402
from config import CliConfig  # noqa: E402
from golden import load_golden  # noqa: E402
from series_cache import SeriesCache  # noqa: E402

GOLDEN_FILE = os.path.join(ROOT, "golden", "order3_expansions.tsv")

settings.register_profile("default", max_examples=60, deadline=None)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(autouse=True)
def no_config_from_environment(monkeypatch):
    monkeypatch.delenv(CONFIG_ENV_VAR, raising=False)


@pytest.fixture(autouse=True)
def restore_root_logger():
    # main() reconfigures the root logger
    handlers = logging.root.handlers[:]
    level = logging.root.level
    yield
    logging.root.handlers[:] = handlers
    logging.root.setLevel(level)


@pytest.fixture
def config():
    return CliConfig(golden_path=GOLDEN_FILE, max_workers=2)


@pytest.fixture
def series_cache():
    return SeriesCache()


@pytest.fixture(scope="session")
def golden_file():
    return GOLDEN_FILE


@pytest.fixture(scope="session")
def golden_tables():
    return load_golden(GOLDEN_FILE)
