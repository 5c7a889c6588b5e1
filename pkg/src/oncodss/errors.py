"""Exception types shared across the package.

Every contract violation raises a subclass of :class:`OncodssError` so the
CLI and the HTTP service can map failures to exit codes / status codes
without string matching.
"""

from __future__ import annotations


class OncodssError(Exception):
    """Base class for all package errors."""


class ValidationError(OncodssError):
    """Bad configuration or arguments, detected before any work starts."""


# --- cohort ingestion ---------------------------------------------------


class MissingColumnError(OncodssError):
    def __init__(self, name: str):
        super().__init__(f"required column {name!r} is missing from the header")
        self.name = name


class EmptyFileError(OncodssError):
    pass


class DuplicateGeneError(OncodssError):
    def __init__(self, symbol: str):
        super().__init__(f"duplicate gene symbol {symbol!r}")
        self.symbol = symbol


class DuplicateSampleError(OncodssError):
    def __init__(self, sample_id: str):
        super().__init__(f"duplicate sample id {sample_id!r}")
        self.sample_id = sample_id


class RaggedRowError(OncodssError):
    def __init__(self, line_number: int, expected: int, got: int):
        super().__init__(
            f"line {line_number}: expected {expected} value cells, got {got}"
        )
        self.line_number = line_number


class NonNumericCellError(OncodssError):
    def __init__(self, line_number: int, column: str, value: str):
        super().__init__(f"line {line_number}, sample {column!r}: non-numeric cell {value!r}")
        self.line_number = line_number
        self.column = column


class NoOverlapError(OncodssError):
    pass


class UnlabeledSampleError(OncodssError):
    pass


# --- survival -----------------------------------------------------------


class EmptyInputError(OncodssError):
    pass


class NonPositiveTimeError(OncodssError):
    def __init__(self, time: float):
        super().__init__(f"observation time must be > 0, got {time}")
        self.time = time


class SingleGroupError(OncodssError):
    pass


class NoEventsError(OncodssError):
    pass


class UnknownParameterError(OncodssError):
    def __init__(self, name: str):
        super().__init__(f"unknown clinical parameter {name!r}")
        self.name = name


# --- differential expression ---------------------------------------------


class GroupTooSmallError(OncodssError):
    pass


class OutOfRangeError(OncodssError):
    def __init__(self, value: float):
        super().__init__(f"p-value out of [0, 1]: {value}")
        self.value = value


# --- enrichment -----------------------------------------------------------


class MalformedLineError(OncodssError):
    def __init__(self, line_number: int):
        super().__init__(f"GMT line {line_number}: fewer than 3 tab-separated fields")
        self.line_number = line_number


class DuplicateTermError(OncodssError):
    def __init__(self, name: str):
        super().__init__(f"duplicate gene-set term {name!r}")
        self.name = name


class EmptyQueryError(OncodssError):
    pass


class EmptyUniverseError(OncodssError):
    pass


# --- models ---------------------------------------------------------------


class UnknownScenarioError(OncodssError):
    def __init__(self, name: str):
        super().__init__(f"unknown scenario {name!r}")
        self.name = name


class EmptyFeatureSetError(OncodssError):
    pass


class ClassTooSmallError(OncodssError):
    def __init__(self, label: str, k: int):
        super().__init__(f"class {label!r} has fewer than {k} samples; cannot build {k} folds")
        self.label = label
        self.k = k


class DegenerateDatasetError(OncodssError):
    pass


class SchemaMismatchError(OncodssError):
    def __init__(self, feature: str, reason: str = "missing"):
        super().__init__(f"feature {feature!r}: {reason}")
        self.feature = feature
        self.reason = reason


class ModelSchemaError(OncodssError):
    """Persisted model document has an unsupported schema_version."""


# --- pipeline / service ----------------------------------------------------


class StageError(OncodssError):
    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


class OutputLockedError(OncodssError):
    pass


class BundleDigestError(OncodssError):
    """Bundle files do not match the digests recorded in the manifest."""
