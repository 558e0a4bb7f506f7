from eulerlab.exceptions import NumericalError, PreconditionError


class IntegrationError(PreconditionError):
    def __init__(self, *args, **kwargs):
        self.message = args[0]
        super(IntegrationError, self).__init__(*args, **kwargs)


class QuadratureError(NumericalError):
    def __init__(self, *args, **kwargs):
        self.message = args[0]
        super(QuadratureError, self).__init__(*args, **kwargs)
