from eulerlab.exceptions import PreconditionError


class LimitError(PreconditionError):
    def __init__(self, *args, **kwargs):
        self.message = args[0]
        super(LimitError, self).__init__(*args, **kwargs)
