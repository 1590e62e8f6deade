"""
Utility modules: exact arithmetic, the exception hierarchy and logging setup.
"""
