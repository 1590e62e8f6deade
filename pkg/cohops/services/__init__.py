"""
Computational services.

- steenrod: operation words, admissibility and Adem rewriting
- unstable: generator sets, monomial bases and the Borel iterator
- motivic: bidegree calculus, P/P_V conversion and twisted products
- classify: operation-ring enumerators
- expression_parser: text expressions to polynomials
- verification: the built-in invariant suites
"""
