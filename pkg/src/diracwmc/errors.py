"""Exception hierarchy shared by all modules."""


class WmcError(Exception):
    """Base class for every error raised by diracwmc."""


class UnboundVariableError(WmcError, KeyError):
    def __init__(self, var: int):
        self.var = var
        super().__init__(f"variable {var} is not bound")

    def __str__(self) -> str:
        return self.args[0]


class ComponentTooLargeError(WmcError):
    def __init__(self, size: int, cap: int, what: str = "component"):
        self.size = size
        self.cap = cap
        super().__init__(f"{what} too large: {size} variables (cap {cap})")


class ExportError(WmcError):
    pass


class WcnfParseError(WmcError):
    pass


class EncodingError(WmcError):
    pass


class DiracTypeError(WmcError):
    """Ill-typed expression; ``rule`` names the violated typing rule."""

    def __init__(self, message: str, rule: str | None = None, node=None):
        self.message = message
        self.rule = rule
        self.node = node
        prefix = f"({rule}) " if rule else ""
        super().__init__(prefix + message)


class DiracSyntaxError(WmcError):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class ModelError(WmcError):
    pass


class DenseSizeError(WmcError):
    """A dense value would exceed the evaluator's size cap."""
