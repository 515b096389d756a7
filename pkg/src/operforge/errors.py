"""Exceptions shared across the library.

The CLI maps these to exit codes: parse errors -> 1, DomainError -> 2,
PrecisionError -> 3.
"""


class OperforgeError(Exception):
    pass


class DomainError(OperforgeError):
    """A precondition on mathematical input is violated."""


class PrecisionError(OperforgeError):
    """A result would need series coefficients outside the known window."""


class SingularRecursionError(DomainError):
    """The degree-k step of a series recursion is not uniquely solvable.

    Carries the degree at which the linear step degenerated.
    """

    def __init__(self, message, degree):
        super().__init__(message)
        self.degree = degree
