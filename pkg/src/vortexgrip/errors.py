"""Typed errors shared across the toolkit.

Every error family carries a distinct process exit code so the CLI can
report failures in a machine-checkable way (0 = success, 2 = usage).
"""


class VortexGripError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class OutOfCalibratedRange(VortexGripError):
    """CAD diameter outside the range the shrinkage regressions are valid on."""

    exit_code = 3


class NoRoot(VortexGripError):
    """Requested printed diameter is not reachable within the valid CAD range."""

    exit_code = 3


class SurfaceTooSmall(VortexGripError):
    """Surface curvature is too tight for the gripper face to meet it."""

    exit_code = 4


class EmptyTrainingSet(VortexGripError):
    """Estimator fit was called with no samples."""

    exit_code = 5


class DatasetTooSmall(VortexGripError):
    """Dataset has fewer rows than the requested number of folds."""

    exit_code = 5


class SchemaMismatch(VortexGripError):
    """File header or feature schema does not match the expected one."""

    exit_code = 6


class ParseError(VortexGripError):
    """Malformed row or key in a data/config file."""

    exit_code = 6

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class VersionUnsupported(VortexGripError):
    """File declares a schema version this build does not understand."""

    exit_code = 6


class NonConvergence(VortexGripError):
    """Iterative routine hit its iteration budget without meeting tolerance."""

    exit_code = 7
