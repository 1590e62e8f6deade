"""
cohops Tests Package

Test suite for cohops:
- Unit tests: one module per library module, plus the CLI (tests/unit)
- Slow tests: full verification suites, marked @pytest.mark.slow

Run tests:
    pytest -m "not slow"
    pytest --cov=cohops
"""
