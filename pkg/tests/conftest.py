"""
Pytest Configuration and Shared Fixtures

Fixtures:
    ctx2, ctx3, ctx5, ctx3_d2: prime contexts
    trivial3, alg_closed3, real_etale, finite_field, local_field: coefficient models
    runner: click CliRunner with stderr kept apart from stdout
    isolate_config: resets Config and COHOPS_* variables for every test (autouse)

Usage:
    def test_something(ctx3, local_field):
        ops = motivic_ops_deg1_descent(2, local_field, Window(4), PrimeContext(3, 2))
"""

import os

import pytest
from click.testing import CliRunner

from cohops.models.coefficient_model import builtin_model, load_model
from cohops.utils.arith import PrimeContext
from config import Config

MODELS_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'data', 'models')


# =============================================================================
# Prime Contexts
# =============================================================================

@pytest.fixture
def ctx2():
    return PrimeContext(2)


@pytest.fixture
def ctx3():
    return PrimeContext(3)


@pytest.fixture
def ctx5():
    return PrimeContext(5)


@pytest.fixture
def ctx3_d2():
    """ℓ = 3 with μ_3 not split (d = 2)."""
    return PrimeContext(3, 2)


# =============================================================================
# Coefficient Models
# =============================================================================

@pytest.fixture
def trivial3(ctx3):
    return builtin_model('trivial', ctx3)


@pytest.fixture
def alg_closed3(ctx3):
    return builtin_model('alg-closed', ctx3)


@pytest.fixture
def real_etale(ctx2):
    return builtin_model('real-etale', ctx2)


@pytest.fixture
def finite_field(ctx3_d2):
    return load_model('finite-field', ctx3_d2, MODELS_DIR)


@pytest.fixture
def local_field(ctx3_d2):
    return load_model('local-field', ctx3_d2, MODELS_DIR)


# =============================================================================
# CLI
# =============================================================================

@pytest.fixture
def runner():
    """
    CliRunner for the steenrod command group

    stderr is captured separately so that --json output can be parsed.
    """
    return CliRunner(mix_stderr=False)


# =============================================================================
# Environment Configuration
# =============================================================================

@pytest.fixture(autouse=True)
def isolate_config(monkeypatch):
    """
    Run every test against default configuration (runs automatically)

    Config attributes are read once at import, so both the environment and
    the class attributes are reset.
    """
    for key in list(os.environ):
        if key.startswith('COHOPS_'):
            monkeypatch.delenv(key, raising=False)
    defaults = {
        'MODELS_DIR': MODELS_DIR,
        'DEFAULT_ELL': 3,
        'DEFAULT_D': 1,
        'DEFAULT_MODE': 'classical',
        'MAX_DEGREE': 30,
        'MAX_WEIGHT': None,
        'LOG_LEVEL': 'WARNING',
        'LOG_FORMAT': '',
        'JSON_INDENT': 2,
        'CHECK_SEED': 1729,
        'CHECK_TRIPLES': 500,
        'ADEM_CHECK_MAX_DEGREE': 60,
    }
    for name, value in defaults.items():
        monkeypatch.setattr(Config, name, value)
    yield


# =============================================================================
# Pytest Configuration
# =============================================================================

def pytest_collection_modifyitems(config, items):
    """Mark everything under tests/unit as a unit test."""
    for item in items:
        if "unit" in item.path.parts:
            item.add_marker(pytest.mark.unit)
