"""
cohops Configuration Management

Centralizes all configuration with environment variable support. A .env
file in the working directory is read at import (python-dotenv).

Environment Variables:
- COHOPS_DEFAULT_ELL: prime ℓ (default: 3)
- COHOPS_DEFAULT_D: twist period d, a divisor of ℓ−1 (default: 1)
- COHOPS_DEFAULT_MODE: classical|motivic|etale (default: classical)
- COHOPS_MAX_DEGREE: degree window (default: 30)
- COHOPS_MAX_WEIGHT: weight window (default: unbounded)
- COHOPS_MODELS_DIR: where --model names are resolved (default: data/models)
- COHOPS_LOG_LEVEL: log level (default: WARNING)
- COHOPS_LOG_FORMAT: log record format
- COHOPS_JSON_INDENT: indent for --json output (default: 2)
- COHOPS_CHECK_SEED / COHOPS_CHECK_TRIPLES / COHOPS_ADEM_CHECK_MAX_DEGREE:
  settings of the `check` suites

License: MIT
"""

import os
from typing import Dict, Optional, Tuple

from dotenv import load_dotenv

from cohops.utils.exceptions import ConfigurationError

load_dotenv()


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw == '':
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}")


def _optional_int_env(name: str) -> Optional[int]:
    raw = os.getenv(name)
    if raw is None or raw == '':
        return None
    return _int_env(name, 0)


class Config:
    """
    Application configuration

    Attributes are read once at import; command-line flags override them
    per invocation.
    """

    # ============================================
    # Paths
    # ============================================
    BASE_DIR = os.path.dirname(os.path.abspath(__file__))
    MODELS_DIR = os.getenv('COHOPS_MODELS_DIR', os.path.join(BASE_DIR, 'data', 'models'))

    # ============================================
    # Arithmetic defaults
    # ============================================
    DEFAULT_ELL = _int_env('COHOPS_DEFAULT_ELL', 3)
    DEFAULT_D = _int_env('COHOPS_DEFAULT_D', 1)
    DEFAULT_MODE = os.getenv('COHOPS_DEFAULT_MODE', 'classical')

    # ============================================
    # Windows
    # ============================================
    MAX_DEGREE = _int_env('COHOPS_MAX_DEGREE', 30)
    MAX_WEIGHT = _optional_int_env('COHOPS_MAX_WEIGHT')

    # ============================================
    # Logging & Output
    # ============================================
    LOG_LEVEL = os.getenv('COHOPS_LOG_LEVEL', 'WARNING')
    LOG_FORMAT = os.getenv('COHOPS_LOG_FORMAT', '')
    JSON_INDENT = _int_env('COHOPS_JSON_INDENT', 2)

    # ============================================
    # Verification suites
    # ============================================
    CHECK_SEED = _int_env('COHOPS_CHECK_SEED', 1729)
    CHECK_TRIPLES = _int_env('COHOPS_CHECK_TRIPLES', 500)
    ADEM_CHECK_MAX_DEGREE = _int_env('COHOPS_ADEM_CHECK_MAX_DEGREE', 60)

    @staticmethod
    def _int_pair(text: str, what: str) -> Tuple[int, ...]:
        parts = [p.strip() for p in str(text).split(',')]
        try:
            return tuple(int(p) for p in parts)
        except ValueError:
            raise ConfigurationError(f"invalid {what}: {text!r}")

    @staticmethod
    def parse_window(text: str) -> Tuple[int, Optional[int]]:
        """
        Parse a window string

        Examples:
            >>> Config.parse_window('30,12')
            (30, 12)
            >>> Config.parse_window('30')
            (30, None)
        """
        values = Config._int_pair(text, 'window')
        if len(values) == 1:
            return values[0], None
        if len(values) == 2:
            return values[0], values[1]
        raise ConfigurationError(f"invalid window: {text!r}")

    @staticmethod
    def parse_bidegree(text: str) -> Tuple[int, int]:
        """
        Parse 'n,i' into a tuple

        Examples:
            >>> Config.parse_bidegree('4,2')
            (4, 2)
        """
        values = Config._int_pair(text, 'bidegree')
        if len(values) != 2:
            raise ConfigurationError(f"invalid bidegree: {text!r} (expected n,i)")
        return values[0], values[1]

    @staticmethod
    def get_config_dict() -> Dict:
        """
        Get configuration as dictionary

        Shown by `check --show-config`.
        """
        return {
            'BASE_DIR': Config.BASE_DIR,
            'MODELS_DIR': Config.MODELS_DIR,
            'DEFAULT_ELL': Config.DEFAULT_ELL,
            'DEFAULT_D': Config.DEFAULT_D,
            'DEFAULT_MODE': Config.DEFAULT_MODE,
            'MAX_DEGREE': Config.MAX_DEGREE,
            'MAX_WEIGHT': Config.MAX_WEIGHT,
            'LOG_LEVEL': Config.LOG_LEVEL,
            'LOG_FORMAT': Config.LOG_FORMAT,
            'JSON_INDENT': Config.JSON_INDENT,
            'CHECK_SEED': Config.CHECK_SEED,
            'CHECK_TRIPLES': Config.CHECK_TRIPLES,
            'ADEM_CHECK_MAX_DEGREE': Config.ADEM_CHECK_MAX_DEGREE,
        }
