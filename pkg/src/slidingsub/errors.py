"""Exception types raised across the package."""


class SlidingSubError(Exception):
    """Base class for all package errors."""


class InvalidInputError(SlidingSubError, ValueError):
    pass


class InvalidArgumentError(SlidingSubError, ValueError):
    pass


class InvalidConfigError(SlidingSubError, ValueError):
    pass


class InvalidSequenceError(SlidingSubError, ValueError):
    """Elements were fed out of arrival order."""


class NoSolutionError(SlidingSubError, LookupError):
    """A solution was requested before any element was processed."""


class SizeExceededError(SlidingSubError, ValueError):
    pass


class StreamParseError(SlidingSubError, ValueError):
    def __init__(self, path, line, message):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


class ConsistencyError(SlidingSubError, AssertionError):
    """Internal state violated an invariant the algorithm relies on."""
