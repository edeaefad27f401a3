"""Exception types shared across the package."""


class DataError(ValueError):
    """Input data violates a documented contract."""


class BundleFormatError(DataError):
    """Malformed session bundle. Carries the header line or byte offset."""

    def __init__(self, message, line=None, offset=None):
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if offset is not None:
            loc.append(f"byte {offset}")
        suffix = f" ({', '.join(loc)})" if loc else ""
        super().__init__(message + suffix)
        self.line = line
        self.offset = offset


class NumericalError(RuntimeError):
    """A numeric procedure produced non-finite values or diverged."""
