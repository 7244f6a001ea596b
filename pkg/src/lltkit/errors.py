"""Exception types shared across the package."""


class LatticeError(ValueError):
    """Malformed input: bad pmf data, incompatible lattices, bad arguments."""


class PreconditionError(ValueError):
    """A stated hypothesis of a bound or estimate does not hold for the input.

    Raised when a computation is refused because its validity condition fails
    (e.g. a growth condition on theta_n, a deviation range for kappa, or an
    extraction level above the available Bernoulli mass).  The message names
    the condition that failed.
    """


class NumericsError(RuntimeError):
    """A numerical result failed an internal consistency check."""
