"""Typed errors shared across the package.

The command line maps these to exit codes (see cli.py): input errors
exit with 2, non-representable catalog entries with 3, inconclusive
searches with 4.
"""


class UnilocError(Exception):
    pass


class InputError(UnilocError):
    """Malformed or out-of-contract input: bad parse, off-curve point,
    non-prime ideal, dimension mismatch."""


class PreconditionError(InputError):
    """A stated precondition of an operation does not hold."""


class NotRepresentableError(UnilocError):
    """Catalog entry that is documented but not computable at desk scale."""


class InconclusiveError(UnilocError):
    """A bounded search was exhausted without a definite answer.

    Exhaustion is never treated as a proof of absence.
    """
