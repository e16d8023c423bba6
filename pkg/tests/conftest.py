import os
import sys

_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if _ROOT not in sys.path:
    sys.path.insert(0, _ROOT)

import numpy as np
import pytest

import config


@pytest.fixture(autouse=True)
def quiet(monkeypatch):
    """No progress bars or status lines during tests."""
    monkeypatch.setattr(config, 'SHOW_PROGRESS', False)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def hidden_periods():
    return list(config.HIDDEN_PERIODS)
