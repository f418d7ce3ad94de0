"""Exception hierarchy shared by every module."""


class GeometryError(Exception):
    """Base class for all errors raised by hhgeom."""


class DomainError(GeometryError, ValueError):
    """A function was evaluated outside its domain (sqrt of a negative, coth at 0, ...)."""


class DivisionByZero(GeometryError, ZeroDivisionError):
    pass


class SingularMetric(GeometryError):
    pass


class SingularFrame(GeometryError):
    pass


class NotClosed(GeometryError):
    """Generators do not span a Lie subalgebra."""


class IncompatibleStructure(GeometryError):
    def __init__(self, alpha, magnitude, message=None):
        self.alpha = alpha
        self.magnitude = magnitude
        super().__init__(
            message or f"J{alpha} violates metric compatibility by {magnitude:.3g}"
        )


class DegenerateSection(GeometryError):
    pass


class NoAdmissibleSection(GeometryError):
    pass


class TheoremViolation(GeometryError):
    def __init__(self, example, theorem, detail=""):
        self.example = example
        self.theorem = theorem
        super().__init__(f"{example}: theorem {theorem} violated {detail}".rstrip())


class UnknownExample(GeometryError, KeyError):
    def __str__(self):
        return f"unknown example {self.args[0]!r}"


class ValidationError(GeometryError):
    def __init__(self, example, check, magnitude=None):
        self.example = example
        self.check = check
        self.magnitude = magnitude
        msg = f"{example}: {check}"
        if magnitude is not None:
            msg += f" (residual {magnitude:.3g})"
        super().__init__(msg)
