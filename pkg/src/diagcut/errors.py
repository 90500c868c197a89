"""Exception types shared across the package."""

from __future__ import annotations


class DiagcutError(Exception):
    """Base class for all package errors."""


class NegativeCoordinate(DiagcutError, ValueError):
    def __init__(self, point):
        super().__init__(f"point {point} leaves N^2")
        self.point = point


class PointOnCutLine(DiagcutError, ValueError):
    def __init__(self, point):
        super().__init__(f"point {point} lies on the cut line")
        self.point = point


class ParseError(DiagcutError, ValueError):
    def __init__(self, message: str, text: str = "", position: int = 0):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


class ZeroCoordinate(DiagcutError, ValueError):
    pass


class PrimeTooSmall(DiagcutError, ValueError):
    pass


class CapExceeded(DiagcutError, ValueError):
    pass


class CardinalityMismatch(DiagcutError, ValueError):
    pass


class VdimMismatch(DiagcutError, ValueError):
    def __init__(self, size: int, conditions: int):
        super().__init__(f"|D2| = {size} but the assigned multiplicities impose {conditions} conditions")
        self.size = size
        self.conditions = conditions


class DivisibilityViolation(DiagcutError, ValueError):
    pass


class MissingEoLSCertificate(DiagcutError, KeyError):
    pass


class BaseMissing(DiagcutError, KeyError):
    pass


class BaseCaseFails(DiagcutError):
    def __init__(self, d: int, r: int, detail: str = ""):
        msg = f"base system L_{d}(m^x{r}) is not non-special"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.d = d
        self.r = r


class NotProjectivePlaneSystem(DiagcutError, ValueError):
    pass


class CertificateFormatError(DiagcutError, ValueError):
    pass
