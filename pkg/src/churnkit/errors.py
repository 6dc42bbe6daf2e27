"""Exception types raised across the package.

Everything derives from ChurnKitError so callers (and the CLI) can catch
one base class and turn it into a diagnostic plus a nonzero exit code.
"""


class ChurnKitError(Exception):
    """Base class for all churnkit errors."""


# --- ingestion ---------------------------------------------------------------

class DatasetIoError(ChurnKitError):
    """The dataset file could not be read."""

    def __init__(self, path, reason=""):
        self.path = str(path)
        msg = f"cannot read dataset file {self.path!r}"
        if reason:
            msg = f"{msg}: {reason}"
        super().__init__(msg)


class MissingColumnError(ChurnKitError):
    """A required column is absent from the CSV header."""

    def __init__(self, name):
        self.name = name
        super().__init__(f"required column {name!r} missing from header")


class UnparseableValueError(ChurnKitError):
    """A cell value does not conform to the column's schema."""

    def __init__(self, row, column, raw, reason=""):
        self.row = row
        self.column = column
        self.raw = raw
        msg = f"row {row}, column {column!r}: cannot parse {raw!r}"
        if reason:
            msg = f"{msg} ({reason})"
        super().__init__(msg)


class EmptyDatasetError(ChurnKitError):
    """An operation that needs at least one record got none."""


# --- preprocessing -----------------------------------------------------------

class InsufficientDataError(ChurnKitError):
    """Not enough values to fit a statistic."""


class DegenerateSplitError(ChurnKitError):
    """A train/test split would leave a class empty in one partition."""


# --- models ------------------------------------------------------------------

class ShapeMismatchError(ChurnKitError):
    """Array shapes are inconsistent with the declared model geometry."""


class NonFiniteActivationError(ChurnKitError):
    """A forward pass produced NaN or infinity (exploding weights)."""


class DegenerateTrainingSetError(ChurnKitError):
    """Training data does not contain both classes."""


class NotFittedError(ChurnKitError):
    """predict/transform called before fit."""


# --- metrics and EDA ---------------------------------------------------------

class LengthMismatchError(ChurnKitError):
    """Predictions and labels have different lengths."""


class MissingSegmentError(ChurnKitError):
    """A churned/retained segment required for a statistic is empty."""


# --- persistence and CLI -----------------------------------------------------

class PersistenceError(ChurnKitError):
    """A model or pipeline file is malformed or inconsistent."""


class FingerprintMismatchError(PersistenceError):
    """Model was trained against different preprocessing parameters."""


class ConfigError(ChurnKitError):
    """Invalid run configuration."""
