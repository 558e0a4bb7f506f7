from eulerlab.exceptions import PreconditionError


class ConvergenceError(PreconditionError):
    def __init__(self, *args, **kwargs):
        self.message = args[0]
        super(ConvergenceError, self).__init__(*args, **kwargs)
