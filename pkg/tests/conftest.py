from pathlib import Path

import numpy as np
import pytest

from rydion.stark import ALPHA_46S, PolarizableState
from rydion.trap import SecularFrequencies, TrapConfig

TWO_PI = 2 * np.pi
ROOT = Path(__file__).resolve().parents[1]
CONFIG_DIR = ROOT / "configs"


@pytest.fixture(scope="session")
def sr_trap():
    return TrapConfig.from_secular(SecularFrequencies.from_hz(1.76e6, 1.70e6, 0.87e6), TWO_PI * 18.1e6)


@pytest.fixture(scope="session")
def rydberg():
    return PolarizableState("46S", ALPHA_46S)


@pytest.fixture(scope="session")
def low_lying():
    return PolarizableState("4D52", 0.0)


@pytest.fixture(scope="session")
def config_path():
    return CONFIG_DIR / "sr88_46s.ini"
