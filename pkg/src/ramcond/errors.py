"""Exception types shared across the package.

The CLI maps InputError to exit code 2 and CheckFailure to exit code 1;
everything else is a genuine bug.
"""


class InputError(ValueError):
    """Malformed input data or a violated construction invariant."""


class CheckFailure(RuntimeError):
    """A mathematical consistency assertion failed during a computation."""
