from typing import Any, Dict, List, Optional, Sequence


class QclawError(Exception):
    """Base class for every error raised by qclaw."""


# Input errors (CLI exit code 2)
class InputError(QclawError):
    """Malformed or inconsistent input. `row`/`col` are 1-based when known."""

    def __init__(self, message: str, row: Optional[int] = None, col: Optional[int] = None):
        location = ""
        if row is not None and col is not None:
            location = f" (row {row}, column {col})"
        elif row is not None:
            location = f" (row {row})"
        super().__init__(message + location)
        self.row = row
        self.col = col


class DimensionMismatch(InputError, ValueError):
    pass


class NotSkewSymmetric(InputError):
    pass


class NotCompatible(InputError):
    pass


class NotSkewSymmetrizable(InputError):
    pass


class IndexOutOfRange(InputError, IndexError):
    pass


class InvalidDepth(InputError, ValueError):
    pass


class FrameMismatch(InputError, ValueError):
    pass


class NotInLattice(InputError):
    pass


class SeedFileError(InputError):
    pass


# Arithmetic
class NotDivisible(QclawError, ArithmeticError):
    pass


class NonLaurent(QclawError):
    """Exact division failed during mutation: the Laurent phenomenon was violated."""

    def __init__(self, message: str, path: Sequence[int] = ()):
        super().__init__(message)
        self.path = tuple(path)


class ZeroElement(QclawError, ValueError):
    pass


class NotHomogeneous(QclawError):
    def __init__(self, degrees: Sequence[int]):
        self.degrees = sorted(set(degrees))
        super().__init__(f"element is not homogeneous; degrees {self.degrees}")


class NotInAdjacentTorus(QclawError):
    def __init__(self, power: int, remainder: str):
        super().__init__(f"component of power {power} does not lie in the adjacent torus: {remainder}")
        self.power = power
        self.remainder = remainder


# Check failures (CLI exit code 1)
class CheckFailure(QclawError):
    def __init__(self, message: str, witnesses: Optional[List[Dict[str, Any]]] = None):
        super().__init__(message)
        self.witnesses = witnesses or []


class HomogeneityViolation(CheckFailure):
    pass


class IdentityViolation(CheckFailure):
    pass


class PropKeyViolation(CheckFailure):
    pass


class SpecializationMismatch(CheckFailure):
    pass


class LaurentViolation(CheckFailure):
    pass


class GradedRankMismatch(CheckFailure):
    pass


# check_name -> error raised by VerificationReport.raise_for_status()
CHECK_FAILURES: Dict[str, type] = {
    "laurent": LaurentViolation,
    "powerids": IdentityViolation,
    "propkey": PropKeyViolation,
    "specialization": SpecializationMismatch,
    "graded": GradedRankMismatch,
    "homogeneity": HomogeneityViolation,
    "domain": CheckFailure,
    "mutation": CheckFailure,
    "upper": CheckFailure,
}
