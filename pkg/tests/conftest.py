import sys
from pathlib import Path

import numpy as np
import pytest

# Add repository root to path
sys.path.append(str(Path(__file__).parent.parent))

from src.utils.constellation import build_conventional_pair, build_proposed_pair
from src.utils.modem import BitMapping, SchemeConfig
from src.utils.schemes import dm_config


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def conv_qpsk_pair():
    return build_conventional_pair(4)


@pytest.fixture
def prop_qpsk_pair():
    return build_proposed_pair(4)


@pytest.fixture
def conv_16qam_pair():
    return build_conventional_pair(16)


@pytest.fixture
def prop_16qam_pair():
    return build_proposed_pair(16)


DM_CONFIG_PARAMS = [
    (4, "conv", BitMapping.CONVENTIONAL),
    (4, "prop", BitMapping.CONVENTIONAL),
    (4, "prop", BitMapping.PROPOSED),
    (16, "conv", BitMapping.CONVENTIONAL),
    (16, "prop", BitMapping.CONVENTIONAL),
    (16, "prop", BitMapping.PROPOSED),
]


@pytest.fixture(params=DM_CONFIG_PARAMS, ids=lambda p: f"{p[0]}-{p[1]}-{p[2].value}")
def dm_cfg(request) -> SchemeConfig:
    return dm_config(*request.param)


@pytest.fixture
def isolated_dirs(tmp_path, monkeypatch):
    """Point results and logs at a temporary directory."""
    from src.config.config import Config

    monkeypatch.setattr(Config, "RESULTS_DIR", str(tmp_path / "results"))
    monkeypatch.setattr(Config, "LOG_DIR", str(tmp_path / "logs"))
    return tmp_path
