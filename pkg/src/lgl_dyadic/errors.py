"""Exception types shared across the package."""


class RangeError(ValueError):
    """An integer argument (degree, order, index) is outside its supported range."""


class DomainError(ValueError):
    """A real argument or grid lies outside the domain where an operation is defined."""


class SolverError(RuntimeError):
    """The node solver failed to converge; indicates a bug, not bad input."""
