from eulerlab.exceptions import PreconditionError, SpecParseError


class LaurentError(PreconditionError):
    def __init__(self, *args, **kwargs):
        self.message = args[0]
        super(LaurentError, self).__init__(*args, **kwargs)


class LaurentParseError(SpecParseError):
    def __init__(self, *args, position=None, **kwargs):
        self.message = args[0]
        self.position = position
        super(LaurentParseError, self).__init__(*args, **kwargs)

    def __str__(self):
        if self.position is None:
            return self.message
        return f"{self.message} (at position {self.position})"


class EvaluationError(PreconditionError):
    def __init__(self, *args, **kwargs):
        self.message = args[0]
        super(EvaluationError, self).__init__(*args, **kwargs)


class GraphError(PreconditionError):
    def __init__(self, *args, **kwargs):
        self.message = args[0]
        super(GraphError, self).__init__(*args, **kwargs)


class SpecError(PreconditionError):
    def __init__(self, *args, **kwargs):
        self.message = args[0]
        super(SpecError, self).__init__(*args, **kwargs)
