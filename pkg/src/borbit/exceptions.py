
__all__ = (
    "BorbitError",
    "RootSystemError",
    "BudgetError",
    "RootError",
    "SpecFormatError",
    "ValidationError",
    "InconsistentSpecError",
    "NotInSpanError",
    "OrbitStringError",
    "WeightError",
    "NotMaxRankError",

    "BorbitWarning",
    "ClassOrderWarning",
)


# errors

class BorbitError(Exception):
    """Borbit base error"""


class RootSystemError(BorbitError):
    """Unknown or malformed Cartan type label"""


class BudgetError(BorbitError):
    """Root system or Weyl group larger than the configured cap"""


class RootError(BorbitError):
    """Vector is not a root of the system"""


class SpecFormatError(BorbitError):
    """Spec document could not be parsed"""


class ValidationError(BorbitError):
    """Spec failed validation"""

    def __init__(self, report):
        self.report = report
        super(ValidationError, self).__init__(report.format())


class InconsistentSpecError(BorbitError):
    """Internal cross-check disagreed, the spec is not realizable"""


class NotInSpanError(BorbitError):
    """Vector lies outside the rational span of the active roots"""


class OrbitStringError(BorbitError):
    """Malformed orbit naming string"""


class WeightError(BorbitError):
    """Weight has wrong length or is not regular dominant"""


class NotMaxRankError(BorbitError):
    """Operation needs every class to be a singleton"""


# warnings

class BorbitWarning(UserWarning):
    """Borbit base warning"""


class ClassOrderWarning(BorbitWarning):
    """Class preorder has distinct but equivalent classes"""
