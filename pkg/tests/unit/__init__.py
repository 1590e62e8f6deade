"""
cohops Unit Tests Package

- test_arith.py - binomials, ν_n, D-index bookkeeping
- test_steenrod.py - admissibility, Adem rewriting, unstable evaluation
- test_unstable.py - Cartan generators, monomial bases, Borel iteration
- test_coefficient_model.py - coefficient models and loading
- test_motivic.py - bidegrees, conversion, P⁰/Q, canonical forms
- test_classify.py - classification enumerators
- test_expression_parser.py - expression parsing
- test_verification.py - verification suites
- test_cli.py - steenrod command line
- test_config.py - configuration and logging setup
"""
