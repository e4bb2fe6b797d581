"""Exception hierarchy shared by all modules."""


class FusionError(Exception):
    """Base class for every error raised by possfusion."""


class FormulaSyntaxError(FusionError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownAtomError(FusionError):
    pass


class CapExceededError(FusionError):
    pass


class ExplosionCapError(CapExceededError):
    pass


class UnknownOperatorError(FusionError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class ClassMismatchError(FusionError):
    pass


class ContractViolationError(FusionError):
    pass


class NaryUndefinedError(FusionError):
    pass


class KBFormatError(FusionError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line
