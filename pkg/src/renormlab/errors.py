"""Exception hierarchy.  The CLI maps InputError to exit 2, NumericalFailure to exit 3."""


class RenormlabError(Exception):
    pass


class InputError(RenormlabError, ValueError):
    """Malformed arguments or violated preconditions."""


class NumericalFailure(RenormlabError):
    """A computation ran but could not reach a trustworthy conclusion."""

    def __init__(self, message, **info):
        super().__init__(message)
        self.info = info


class EntropyGateError(NumericalFailure):
    pass


class CertificateError(NumericalFailure):
    pass


class NonRecurrenceError(NumericalFailure):
    pass


class EscapeError(NumericalFailure):
    pass


class BracketError(NumericalFailure):
    pass
