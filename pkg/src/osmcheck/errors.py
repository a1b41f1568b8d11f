"""Exception hierarchy shared across the toolchain."""


class OsmError(Exception):
    """Base class for every error raised by this package."""


class SourceError(OsmError):
    """An error tied to a (line, col) position in a source file."""

    def __init__(self, message, line, col):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class LexError(SourceError):
    def __init__(self, line, col, char):
        super().__init__(f"unexpected character {char!r}", line, col)
        self.char = char


class ParseError(SourceError):
    def __init__(self, line, col, message, expected=()):
        super().__init__(message, line, col)
        self.expected = tuple(expected)


class DuplicateNameError(ParseError):
    pass


class UnknownPointcutError(ParseError):
    pass


class PrecedenceError(OsmError):
    pass


class AliasError(OsmError):
    pass


class InlineRecursionError(OsmError):
    def __init__(self, cycle):
        super().__init__("recursive inlining: " + " -> ".join(cycle))
        self.cycle = tuple(cycle)


class InlineDepthError(OsmError):
    pass


class UnknownMethodError(OsmError):
    pass


class FormulaParseError(OsmError):
    def __init__(self, position, message, expected=()):
        super().__init__(f"at {position}: {message}")
        self.position = position
        self.expected = tuple(expected)


class UnknownAtomError(OsmError):
    def __init__(self, name):
        super().__init__(f"unknown atom {name!r}")
        self.name = name


class SchemaError(OsmError):
    pass


class TotalityError(OsmError):
    pass


class EmptyInitialError(OsmError):
    pass


class EmptyTraceError(OsmError):
    pass


class PropertySpecError(OsmError):
    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno
