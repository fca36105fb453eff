import os
import random
import sys

import pytest

project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from src.core.precision import PrecisionContext

CATALOG_PATH = os.path.join(project_root, "catalog.json")


@pytest.fixture
def ctx50():
    return PrecisionContext(50)


@pytest.fixture
def ctx100():
    return PrecisionContext(100)


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def catalog_path():
    return CATALOG_PATH
