from eulerlab.exceptions import PreconditionError, SpecParseError


class ShiftopsError(PreconditionError):
    def __init__(self, *args, **kwargs):
        self.message = args[0]
        super(ShiftopsError, self).__init__(*args, **kwargs)


class PochhammerError(ShiftopsError):
    """A zero factor in (gamma)_a for negative a."""


class BetaReductionError(ShiftopsError):
    """The reduction coefficient has a pole at the requested parameters."""


class ShiftVerificationRefused(ShiftopsError):
    def __init__(self, *args, point=None, **kwargs):
        self.point = point
        super(ShiftVerificationRefused, self).__init__(*args, **kwargs)


class ShiftOperatorFormatError(SpecParseError):
    def __init__(self, *args, **kwargs):
        self.message = args[0]
        super(ShiftOperatorFormatError, self).__init__(*args, **kwargs)
