"""
cohops - Symbolic Cohomology Operations Engine

This package contains the computational core for mod-ℓ Steenrod-type
operations in the étale and motivic settings:
- Exact mod-ℓ arithmetic and sign bookkeeping (utils)
- Bidegrees, coefficient models and descriptor types (models)
- Adem rewriting, unstable enumeration, motivic calculus and
  classification enumerators (services)
- The `steenrod` command-line front end (cli)

Author: cohops Team
License: MIT
"""

import os

# Read version from VERSION file (single source of truth)
_version_file = os.path.join(os.path.dirname(os.path.dirname(__file__)), 'VERSION')
try:
    with open(_version_file, 'r') as f:
        __version__ = f.read().strip()
except FileNotFoundError:
    __version__ = "1.0.0"  # Fallback

__author__ = "cohops Team"
