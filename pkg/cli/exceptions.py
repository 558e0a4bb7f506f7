from eulerlab.exceptions import SpecParseError


class SpecFileError(SpecParseError):
    def __init__(self, *args, path=None, **kwargs):
        self.message = args[0]
        self.path = path
        super(SpecFileError, self).__init__(*args, **kwargs)

    def __str__(self):
        if self.path is None:
            return self.message
        return f"{self.path}: {self.message}"
