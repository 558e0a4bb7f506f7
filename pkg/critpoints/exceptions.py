from eulerlab.exceptions import NumericalError, PreconditionError


class CriticalPointError(PreconditionError):
    def __init__(self, *args, **kwargs):
        self.message = args[0]
        super(CriticalPointError, self).__init__(*args, **kwargs)


class DegenerateSystemError(CriticalPointError):
    """The critical equations vanish identically or the polytopes are degenerate."""


class NonConvergenceError(NumericalError):
    def __init__(self, *args, steps=None, **kwargs):
        self.message = args[0]
        self.steps = steps
        super(NonConvergenceError, self).__init__(*args, **kwargs)


class NonGenericParametersError(NumericalError):
    def __init__(self, *args, **kwargs):
        self.message = args[0]
        super(NonGenericParametersError, self).__init__(*args, **kwargs)


class InconsistentCountError(NumericalError):
    def __init__(self, *args, counts=None, **kwargs):
        self.message = args[0]
        self.counts = list(counts or [])
        super(InconsistentCountError, self).__init__(*args, **kwargs)
