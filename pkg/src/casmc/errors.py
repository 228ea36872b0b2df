"""Exception hierarchy shared by every engine and loader."""


class CasmcError(Exception):
    """Base class for all errors raised by the toolkit."""


class MalformedSpaceError(CasmcError):
    pass


class DomainError(CasmcError):
    """A point set does not live in the carrier of the space it is used with."""


class FormulaError(CasmcError):
    """A formula is well-formed syntactically but cannot be evaluated on a model."""


class FormulaSyntaxError(FormulaError):
    def __init__(self, message, text="", line=1, column=1):
        self.message = message
        self.text = text
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")

    def caret(self):
        """Return the offending source line with a ``^`` under the error column."""
        lines = self.text.splitlines() or [""]
        src = lines[self.line - 1] if self.line - 1 < len(lines) else ""
        return f"{src}\n{' ' * (self.column - 1)}^ {self.message}"


class OracleInfeasibleError(CasmcError):
    """A brute-force oracle refused an instance that exceeds its size cap."""


class ModelError(CasmcError):
    pass


class KernelValidityError(ModelError):
    def __init__(self, source, target, value, time=None):
        self.source = source
        self.target = target
        self.value = value
        self.time = time
        where = "" if time is None else f" at step {time}"
        super().__init__(
            f"kernel entry K[{source}][{target}] = {value!r} is not a valid probability{where}"
        )


class FormatError(CasmcError):
    """Malformed file content; ``line`` or ``offset`` locates the problem."""

    def __init__(self, message, path=None, line=None, offset=None):
        self.path = path
        self.line = line
        self.offset = offset
        loc = []
        if path is not None:
            loc.append(str(path))
        if line is not None:
            loc.append(f"line {line}")
        if offset is not None:
            loc.append(f"byte {offset}")
        super().__init__(f"{': '.join(loc)}: {message}" if loc else message)


class UnsupportedModelError(CasmcError):
    pass


class InvariantViolation(CasmcError):
    """Two independent computations disagreed; should never happen."""
