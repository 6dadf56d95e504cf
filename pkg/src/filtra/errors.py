"""Exception hierarchy.

Every error raised for invalid *input data* derives from :class:`FiltraError`;
the command line maps these to exit status 1.
"""


class FiltraError(Exception):
    """Base class for domain errors."""


class InvariantViolation(FiltraError):
    """A value violates a structural invariant (d∘d ≠ 0, non-commuting square, ...)."""


class ContainmentViolation(FiltraError):
    """A subspace is not contained where it is required to be."""


class FieldMismatch(FiltraError):
    """Operands live over different fields."""


class NotMonic(FiltraError):
    """A sequence has a structure map that is not degreewise injective."""


class NotBoundedBelow(FiltraError):
    """A sequence has a nonzero bottom level."""


class InvalidAlgebra(FiltraError):
    """A filtered algebra fails associativity, unitality or compatibility."""
