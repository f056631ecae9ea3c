"""Exception hierarchy. Every error carries a stable machine-readable code."""
from __future__ import annotations


class WorkbenchError(Exception):
    """Base class for all engine errors."""

    code = "internal"

    def __init__(self, message: str, **detail):
        super().__init__(message)
        self.message = message
        self.detail = detail


class ValidationError(WorkbenchError):
    code = "validation"


class ResourceLimitError(WorkbenchError):
    code = "resource-limit"


class QasmError(WorkbenchError):
    """Parse failure with a position in the source text."""

    code = "qasm-parse"

    def __init__(self, message: str, line: int, column: int, token: str = ""):
        super().__init__(message, line=line, column=column, token=token)
        self.line = line
        self.column = column
        self.token = token

    def __str__(self):
        return f"line {self.line}, column {self.column}: {self.message}"


class QasmEmitError(WorkbenchError):
    code = "qasm-emit"


class SelectorError(WorkbenchError):
    code = "bad-selector"


class UnknownMachineError(WorkbenchError):
    code = "unknown-machine"


class CalibrationDataError(WorkbenchError):
    """A gate or qubit has no entry in the calibration snapshot."""

    code = "missing-calibration"


class TranspileError(WorkbenchError):
    code = "transpile"


class MatchError(WorkbenchError):
    """Logical/physical matching could not consume the physical gate stream."""

    code = "match-mismatch"


class QueryFileError(WorkbenchError):
    code = "query-file"


class BundleError(WorkbenchError):
    """Job-bundle failures; `code` distinguishes corrupt/schema/width/version."""

    code = "bundle"

    def __init__(self, message: str, code: str, **detail):
        super().__init__(message, **detail)
        self.code = code


BUNDLE_CORRUPT = "bundle-corrupt"
BUNDLE_SCHEMA = "bundle-schema"
BUNDLE_WIDTH_MISMATCH = "bundle-width-mismatch"
BUNDLE_VERSION = "bundle-version"
