class DimensionError(ValueError):
    """Operands live on domains of different sizes."""


class CapExceeded(ValueError):
    """A size bound was hit; ``flag`` names the CLI option that lifts it."""

    def __init__(self, message, flag="--cap"):
        super().__init__(f"{message} (override with {flag})")
        self.flag = flag


class InvariantViolation(AssertionError):
    """A structural theorem the computation relies on came out false."""


class NotBlurred(ValueError):
    pass
