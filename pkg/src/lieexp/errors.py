"""Exception hierarchy shared by every engine."""


class LieExpError(Exception):
    """Base class for domain errors (CLI exit status 1)."""


class SignatureViolation(LieExpError):
    """A monomial uses an exponential power or polynomial power the algebra forbids."""


class SignatureMismatch(LieExpError):
    """Operands come from different algebras, or the operation does not apply to the family."""


class MissingDerivationSlot(LieExpError):
    pass


class DomainUnderflow(LieExpError):
    pass


class EmptyElement(LieExpError):
    pass


class CapTooLarge(LieExpError):
    pass


class OutOfWindow(LieExpError):
    pass


class PreconditionError(LieExpError):
    pass


class SearchExhausted(LieExpError):
    pass


class TacticFailed(LieExpError):
    """A proof-step tactic produced zero where a nonzero element was expected."""

    def __init__(self, tactic, message, element=None):
        super().__init__(f"{tactic}: {message}")
        self.tactic = tactic
        self.element = element


class TraceInvalid(LieExpError):
    pass


class ParseError(LieExpError):
    """Malformed expression text; carries 1-based line and column."""

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column
