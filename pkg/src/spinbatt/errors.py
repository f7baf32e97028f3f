"""Exception types shared across the package.

Parameter and domain violations raise plain ValueError; these classes mark
failures of the numerics themselves, which callers may want to distinguish.
"""


class NumericsError(RuntimeError):
    """A numerical routine produced an unreliable result (never silent)."""


class ConvergenceError(NumericsError):
    """Eigenvalue iteration hit its sweep cap; carries the failing index."""

    def __init__(self, index: int, sweeps: int):
        self.index = index
        self.sweeps = sweeps
        super().__init__(
            f"eigenvalue {index} did not converge within {sweeps} QL sweeps"
        )


class SearchWindowError(RuntimeError):
    """No qualifying maximum found; advise retrying with a larger window."""
