"""Exception types shared across the package."""


class ClinsumError(Exception):
    """Base class for all package errors."""


class TreeParseError(ClinsumError, ValueError):
    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class SpanError(ClinsumError, ValueError):
    pass


class TreebankError(ClinsumError, ValueError):
    def __init__(self, message, index):
        super().__init__(f"entry {index}: {message}")
        self.index = index


class PatternSyntaxError(ClinsumError, ValueError):
    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class SurgeryError(ClinsumError, ValueError):
    pass


class ScriptError(ClinsumError, ValueError):
    pass


class ResourceError(ClinsumError, ValueError):
    """A bundled or user-supplied resource file failed validation."""

    def __init__(self, message, path=None, line=None):
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f":{line}"
        super().__init__(f"{where}: {message}" if where else message)
        self.path = path
        self.line = line


class MissingTreeError(ClinsumError, LookupError):
    """No parse tree is available for a pruned fragment."""

    def __init__(self, fragments):
        if isinstance(fragments, str):
            fragments = [fragments]
        self.fragments = list(fragments)
        listing = "; ".join(repr(f) for f in self.fragments)
        super().__init__(f"no tree for fragment(s): {listing}")
