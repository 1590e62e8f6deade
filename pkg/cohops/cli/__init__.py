"""
Command-line front end.

Usage:
    python steenrod.py normalize --l 3 "P1 P1"
"""

from cohops.cli.commands import cli

__all__ = ['cli']
