"""
cohops - Custom Exception Classes

Provides application-specific exceptions for:
- Invalid arguments and configuration
- Expression syntax errors (with source position)
- Rewriting failures in the Adem engine
- Out-of-zone conversions and malformed coefficient models

Usage:
    from cohops.utils.exceptions import ConversionZoneError

    if n < 2 * i:
        raise ConversionZoneError("conversion not established in the zone i<n<2i")

Educational Notes:
- Library code raises, the CLI decides the exit status
- ExpressionSyntaxError maps to exit code 2 (usage), every other
  CohopsException maps to exit code 3 (domain error)
"""


class CohopsException(Exception):
    """
    Base exception for all cohops errors.

    All custom exceptions inherit from this.
    Allows catching any cohops-specific error with one except clause.
    """
    pass


class ValidationError(CohopsException):
    """
    Raised when input validation fails.

    Common causes:
    - ℓ is not prime, or d does not divide ℓ−1
    - Negative operation index
    - Sq letters used at odd ℓ, or P letters at ℓ=2
    - Duplicate generator labels handed to the monomial enumerator
    """
    pass


class ConfigurationError(CohopsException):
    """
    Raised when configuration values are invalid.

    Common causes:
    - COHOPS_* environment variable that does not parse
    - Window string such as "30,x"
    - Model file that cannot be located
    """
    pass


class ExpressionSyntaxError(ValidationError):
    """
    Raised when an operation expression cannot be parsed.

    Common causes:
    - Unknown letter (e.g. "R3")
    - Coefficient symbol placed after operation letters
    - Dangling "+" at the end of the input

    Attributes:
        position: character offset of the offending token (or None)
    """

    def __init__(self, message: str, position: int = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class UnknownSymbolError(ExpressionSyntaxError):
    """
    Raised when an expression names a coefficient symbol the active
    model does not declare.

    Common causes:
    - "b^2 P0" with the trivial model (which has no periodicity element)
    - Typo in a symbol name
    """
    pass


class AdemReductionError(CohopsException):
    """
    Raised when a word cannot be handed to the Adem engine.

    Common causes:
    - Formal Voevodsky letters (PV, SqV) in the input
    - Mixing β and Sq letters at ℓ=2 in motivic mode
    """
    pass


class NormalFormError(CohopsException):
    """
    Raised when the motivic canonical form cannot push every P⁰ letter
    into the trailing block of a word.
    """
    pass


class ConversionZoneError(CohopsException):
    """
    Raised when a P ↔ P_V conversion is requested outside the range
    where the identity is known (n≥2i and n≥2a), or against the
    direction's constraint on a and i.

    Common causes:
    - Source bidegree in the intermediate zone i<n<2i
    - P→P_V asked for with a>i
    """
    pass


class CoefficientModelError(CohopsException):
    """
    Raised when a coefficient model is malformed or lacks what an
    operation needs.

    Common causes:
    - Model file version is not "1" or has unknown fields
    - Declared P-action image of the wrong bidegree
    - Periodicity element b missing when P⁰ must be evaluated
    - Coefficient symbol unknown to the model
    """
    pass


class DomainError(CohopsException):
    """
    Raised when a request is mathematically outside the supported domain.

    Common causes:
    - ν_n or Q-operations requested at ℓ=2
    - Conjecture enumerator with n<2i
    - ζ-enumerator asked for with d≠1
    - Borel iteration over a non-transgressive generator
    """
    pass
