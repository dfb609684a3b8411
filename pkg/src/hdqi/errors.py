"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command-line front end:
2 input error, 3 cap exceeded, 4 decoder failure, 5 verification failure.
"""

from __future__ import annotations


class HdqiError(Exception):
    exit_code = 2

    @property
    def kind(self) -> str:
        return type(self).__name__


class InputError(HdqiError, ValueError):
    """Malformed or out-of-contract input."""


class ParseError(InputError):
    def __init__(self, message: str, position: int | None = None, line: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"position {position}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(message + suffix)
        self.position = position
        self.line = line


class DimensionError(InputError):
    pass


class NonHermitianTerm(InputError):
    pass


class DuplicateTerm(InputError):
    pass


class NoncommutingTerms(InputError):
    pass


class DegeneratePolynomial(InputError):
    pass


class CapExceeded(HdqiError):
    exit_code = 3


class KTooLarge(CapExceeded):
    pass


class ComponentTooLarge(CapExceeded):
    pass


class DecoderError(HdqiError):
    exit_code = 4


class AmbiguousSyndrome(DecoderError):
    pass


class UnknownSyndrome(DecoderError):
    pass


class VerificationError(HdqiError):
    exit_code = 5


class NonpositiveNorm(VerificationError):
    pass


class ResidualOnA(VerificationError):
    pass
