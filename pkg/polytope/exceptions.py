from eulerlab.exceptions import PreconditionError


class PolytopeError(PreconditionError):
    def __init__(self, *args, **kwargs):
        self.message = args[0]
        super(PolytopeError, self).__init__(*args, **kwargs)


class DimensionGuardError(PolytopeError):
    pass


class NotFullDimensionalError(PolytopeError):
    pass


class DegenerateConeError(PolytopeError):
    pass
