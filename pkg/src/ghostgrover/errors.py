"""Exception types shared across the package."""


class GhostGroverError(Exception):
    """Base class for every error raised by ghostgrover."""


class InvalidArgumentError(GhostGroverError, ValueError):
    """An argument is outside the domain an operation accepts."""


class InvalidStateError(GhostGroverError, ValueError):
    """A state or count record violates an invariant the operation needs."""


class InputFileError(GhostGroverError, ValueError):
    """An input file exists but its content is malformed."""


class ObjectParseError(InputFileError):
    """An object raster file could not be parsed.

    ``line`` and ``column`` are 1-based and refer to the offending character
    when known.
    """

    def __init__(self, message, path=None, line=None, column=None):
        self.path = path
        self.line = line
        self.column = column
        loc = ""
        if path is not None:
            loc = str(path)
            if line is not None:
                loc += f":{line}"
                if column is not None:
                    loc += f":{column}"
            loc += ": "
        super().__init__(loc + message)


class ResourceError(GhostGroverError, RuntimeError):
    """The requested problem size exceeds a configured memory/size cap."""
