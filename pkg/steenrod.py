#!/usr/bin/env python3
"""
steenrod - entry script

Runs the cohops command group.

Usage:
    python steenrod.py --help
    python steenrod.py normalize --l 3 --mode motivic "P1 P1"
    python steenrod.py check --suite adem
"""

import os
import sys

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from cohops.cli import cli  # noqa: E402


if __name__ == '__main__':
    cli(prog_name='steenrod')
