"""
Kernel errors.

Every error the kernel reports is a ``KernelError``. The class hierarchy rides
on Django's ``ValidationError`` so that each error carries a stable ``code``;
the command line prints that code in its diagnostics.
"""

from django.core.exceptions import ValidationError


class KernelError(ValidationError):
    """
    Base class of all kernel errors.

    Attributes:
        message: human readable text
        code: stable short diagnostic code, e.g. ``E-FACE-DISAGREE``
        span: ``(start, end)`` character offsets in the source, when known
        substitution: interval substitution witnessing the failure, when any
    """

    default_code = "E-INTERNAL"

    def __init__(self, message, *, span=None, substitution=None):
        super().__init__(message, code=self.default_code)
        self.span = span
        self.substitution = substitution

    def __str__(self):
        return self.message


class InternalError(KernelError):
    default_code = "E-INTERNAL"


class ParseError(KernelError):
    default_code = "E-PARSE"

    def __init__(self, message, *, span=None, expected=()):
        super().__init__(message, span=span)
        self.expected = frozenset(expected)


class UnboundVariable(KernelError):
    default_code = "E-UNBOUND"


class TypeMismatch(KernelError):
    default_code = "E-TYPE-MISMATCH"


class CannotInfer(KernelError):
    default_code = "E-CANNOT-INFER"


class NotAType(KernelError):
    default_code = "E-NOT-A-TYPE"


class IllFormedCofibration(KernelError):
    default_code = "E-COFIB"


class FaceDisagreement(KernelError):
    default_code = "E-FACE-DISAGREE"

    def __init__(self, message, *, i, j, span=None, substitution=None):
        super().__init__(message, span=span, substitution=substitution)
        self.i = i
        self.j = j


class BoundaryMismatch(KernelError):
    default_code = "E-BOUNDARY"


class FreezeViolation(KernelError):
    default_code = "E-FREEZE"


class NotFibrant(FreezeViolation):
    default_code = "E-NOT-FIBRANT"


class UnsupportedCoercion(KernelError):
    default_code = "E-COE-EXT-DIM"


class FloorWallDisagreement(KernelError):
    default_code = "E-FLOOR-WALL"


class DuplicateDefinition(KernelError):
    default_code = "E-DUPLICATE"
