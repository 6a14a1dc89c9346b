"""Exception types shared across the package."""


class InputError(ValueError):
    """Invalid parameters or malformed input data."""


class ResourceError(RuntimeError):
    """A computation would exceed the configured point or evaluation budget."""
