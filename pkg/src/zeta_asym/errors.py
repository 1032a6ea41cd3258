"""Exception hierarchy.

Errors fall into three families which the CLI maps onto exit codes:
verification failures (exit 1), numeric environment failures (exit 3)
and plain input/domain errors.
"""


class ZetaAsymError(Exception):
    pass


class DomainError(ZetaAsymError, ValueError):
    pass


class OutOfRange(ZetaAsymError, IndexError):
    pass


class TableFormatError(ZetaAsymError, ValueError):
    """A data file line could not be parsed or violates a table invariant."""

    def __init__(self, message, line_no=None, line=None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
            if line is not None:
                message += f"  [{line.strip()}]"
        super().__init__(message)
        self.line_no = line_no


# -- numeric environment failures --------------------------------------------

class NumericFailure(ZetaAsymError):
    pass


class NonConvergence(NumericFailure):
    def __init__(self, message, last_estimate=None, last_difference=None):
        super().__init__(message)
        self.last_estimate = last_estimate
        self.last_difference = last_difference


class EnvelopeError(NumericFailure):
    pass


class InsufficientPrecision(NumericFailure):
    pass


class IllConditioned(NumericFailure):
    pass


class PathDisagreement(NumericFailure):
    """Two independent evaluation routes for the same quantity disagree."""


# -- symbolic / verification failures ---------------------------------------

class VerificationFailure(ZetaAsymError):
    pass


class DivergentIndex(DomainError):
    pass


class ShapeError(DomainError):
    pass


class NonNilpotentInput(ZetaAsymError, ValueError):
    pass


class UnmatchedShape(VerificationFailure):
    def __init__(self, terms):
        self.terms = list(terms)
        shown = ", ".join(str(t) for t in self.terms[:6])
        more = "" if len(self.terms) <= 6 else f" (+{len(self.terms) - 6} more)"
        super().__init__(f"no lemma rule covers: {shown}{more}")


class ResidualAmzv(VerificationFailure):
    def __init__(self, residual):
        # residual: list of (coefficient, AmzvIndex)
        self.residual = list(residual)
        shown = ", ".join(f"{c}*{idx}" for c, idx in self.residual)
        super().__init__(f"alternating MZVs left after reduction: {shown}")


class NoRelationFound(VerificationFailure):
    pass


class ConjectureMismatch(VerificationFailure):
    pass
