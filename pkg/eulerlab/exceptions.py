class EulerError(Exception):
    def __init__(self, *args, **kwargs):
        self.message = args[0] if args else ""
        super(EulerError, self).__init__(*args, **kwargs)


class PreconditionError(EulerError):
    """Input outside the domain an operation is defined on."""
    exit_code = 2


class NumericalError(EulerError):
    """A numerical procedure failed to reach its tolerance."""
    exit_code = 3


class SpecParseError(EulerError):
    """Malformed expression, spec file or operator text."""
    exit_code = 4
