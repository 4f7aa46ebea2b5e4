"""Exception types shared by every module."""


class StructuralError(ValueError):
    """A table, functor or diagram violates one of its invariants."""


class ContractViolation(ValueError):
    """An operation was called outside its precondition."""


class EnumerationLimit(RuntimeError):
    """A brute-force enumeration exceeded the configured cap."""


class ParseError(ValueError):
    def __init__(self, message, line=0, column=0, path=None):
        self.line = line
        self.column = column
        self.path = path
        where = f"{path or '<input>'}:{line}:{column}"
        super().__init__(f"{where}: {message}")
