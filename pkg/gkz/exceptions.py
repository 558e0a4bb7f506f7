from eulerlab.exceptions import PreconditionError


class GkzError(PreconditionError):
    def __init__(self, *args, **kwargs):
        self.message = args[0]
        super(GkzError, self).__init__(*args, **kwargs)


class TorusRecipeError(GkzError):
    """The fixed coordinates do not give an invertible solve of the Euler operators."""
