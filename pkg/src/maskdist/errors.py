"""Exception hierarchy shared by the frontend, the compiler and the CLI."""


class MaskDistError(Exception):
    """Base class for all errors raised by this package."""


class SourceError(MaskDistError):
    """An error tied to a position in a model source file."""

    def __init__(self, message, line=1, col=1, filename=None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.col = col
        self.filename = filename

    def format(self, filename=None):
        name = filename or self.filename or "<input>"
        return f"{name}:{self.line}:{self.col}: {self.message}"

    def __str__(self):
        return self.format()


class ParseError(SourceError):
    def __init__(self, message, line=1, col=1, expected=(), filename=None):
        self.expected = tuple(sorted(set(expected)))
        if self.expected:
            message = f"{message} (expected one of: {', '.join(self.expected)})"
        super().__init__(message, line, col, filename)


class ResolveError(SourceError):
    pass


class CompileError(MaskDistError):
    pass


class InitialNotUnique(CompileError):
    """Raised when the conjunction of Initial clauses does not pin down one state."""

    def __init__(self, message, samples=()):
        super().__init__(message)
        self.samples = tuple(samples)


class StateExplosion(CompileError):
    def __init__(self, cap):
        super().__init__(f"reachable state count exceeds the cap of {cap}")
        self.cap = cap


class AlphabetClash(MaskDistError):
    pass


class MalformedPlay(MaskDistError):
    pass
