import json
import logging
import os
import sys

import pytest

# Add the parent directory to the Python path to allow imports from the main application
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from app.config import get_settings
from app.schemas import BVPConfig, MLParams, QuadratureRule
from app.utils.io import dump_bvp_config


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Every test sees the documented defaults, whatever the local .env holds."""
    for name in list(os.environ):
        if name.startswith("KPRAB_"):
            monkeypatch.delenv(name)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
    # main() binds its handler to the stderr of the test that first ran it
    app_logger = logging.getLogger("app")
    for handler in list(app_logger.handlers):
        app_logger.removeHandler(handler)
    app_logger.setLevel(logging.NOTSET)


@pytest.fixture
def exponential_params():
    """k = rho = beta = gamma = 1: the series is exp(z)"""
    return MLParams(k=1.0, rho=1.0, beta=1.0, gamma=1.0)


@pytest.fixture
def rl_params():
    """k = 1, omega = 0 reduces every operator to Riemann-Liouville"""
    return MLParams(k=1.0, rho=1.0, beta=2.5, gamma=0.7, omega=0.0)


@pytest.fixture
def general_params():
    return MLParams(k=1.0, rho=1.0, beta=2.5, gamma=0.7, omega=0.4)


@pytest.fixture
def reduction_config():
    """RL reduction with boundary coupling: beta = 2.5 on [0, 1], xi = 0.5, eta = 0.3"""
    params = MLParams(k=1.0, rho=1.0, beta=2.5, gamma=0.0, omega=0.0)
    return BVPConfig(a=0.0, b=1.0, xi=0.5, eta=0.3, params=params)


@pytest.fixture
def uncoupled_config():
    """Same as reduction_config with eta = 0"""
    params = MLParams(k=1.0, rho=1.0, beta=2.5, gamma=0.0, omega=0.0)
    return BVPConfig(a=0.0, b=1.0, xi=0.5, eta=0.0, params=params)


@pytest.fixture
def prabhakar_config():
    """Genuine k-Prabhakar problem with every parameter active"""
    params = MLParams(k=1.2, rho=0.9, beta=3.0, gamma=0.6, omega=0.3)
    return BVPConfig(a=0.0, b=1.5, xi=0.6, eta=0.2, params=params)


@pytest.fixture
def small_rule():
    """Cheap fixed rule for nested quadratures"""
    return QuadratureRule(n_panels=8, order=8, tol=1e-8, max_refinements=4)


@pytest.fixture
def config_file(tmp_path):
    """Write a BVPConfig as a schema-1 JSON document and return its path"""

    def write(config, name="config.json"):
        path = tmp_path / name
        path.write_text(dump_bvp_config(config), encoding="utf-8")
        return str(path)

    return write


@pytest.fixture
def raw_config_file(tmp_path):
    """Write an arbitrary JSON payload as a configuration file"""

    def write(payload, name="raw.json"):
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return str(path)

    return write
